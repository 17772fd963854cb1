#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "ccfd/scheme.hpp"

namespace ccfd {

/// Published coefficient sets for the three bundled schemes, kept as decimal
/// strings at full precision and parsed once on access. The same values ship
/// as JSON files under data/.
namespace tables {

struct NamedValue {
    const char* name;
    const char* value;
};

inline const std::vector<NamedValue>& coefficients(SchemeId id) {
    static const std::vector<NamedValue> p1 = {
        {"a00", "1"},
        {"a01", "1.819471046485240606224"},
        {"a02", "-0.35267551059842805472"},
        {"a03", "0.04771109706200871159"},
        {"b00", "-2.51450663294882081900"},
        {"b01", "2.51450663294882081900"},
        {"b02", "0"},
        {"b03", "0"},
    };
    static const std::vector<NamedValue> p2 = {
        {"a00", "1"},
        {"a01", "-13.03017400229961886282"},
        {"a02", "-20.91617294263996740256"},
        {"a03", "-2.92791246902036483846"},
        {"b00", "0"},
        {"b01", "26.03939124025922779992"},
        {"b02", "-16.20452306655850804873"},
        {"b03", "-9.83486817370072152755"},
        {"a10", "0.25657462461142366283"},
        {"a11", "1"},
        {"a12", "0.35679065966631573481"},
        {"a13", "0.05804452388802976148"},
        {"b10", "-0.76360320980590068451"},
        {"b11", "0"},
        {"b12", "0.61939982125193304707"},
        {"b13", "0.14420338855396769295"},
    };
    static const std::vector<NamedValue> p3 = {
        {"a00", "1"},
        {"a01", "-13.89214768040508829472"},
        {"a02", "-21.41292977597984048543"},
        {"a03", "-2.31431720758483283618"},
        {"b00", "0"},
        {"b01", "27.88752780480513493444"},
        {"b02", "-19.15566094564050914073"},
        {"b03", "-8.73186685916462579371"},
        {"a10", "1.29886300269147980657"},
        {"a11", "1"},
        {"a12", "8.23654271107762525617"},
        {"a13", "3.22663580200212241067"},
        {"b10", "-2.41737032042215105321"},
        {"b11", "0"},
        {"b12", "-6.50993055450477520196"},
        {"b13", "8.92730087492692625517"},
        {"a20", "0.06337857839129412696"},
        {"a21", "0.37486590693825938558"},
        {"a22", "1"},
        {"a23", "0.25993267978377243566"},
        {"b20", "-0.16112692262471739468"},
        {"b21", "-0.60739819861958466163"},
        {"b22", "0"},
        {"b23", "0.76852512124430449880"},
    };
    switch (id) {
        case SchemeId::P1: return p1;
        case SchemeId::P2: return p2;
        case SchemeId::P3: return p3;
    }
    return p1;
}

inline const std::vector<NamedValue>& weights(SchemeId id) {
    static const std::vector<NamedValue> p1 = {
        {"w0", "0.365512831337005295040"},
        {"w1", "1.19512817265565063352"},
        {"w2", "0.92987182734434925546"},
        {"w3", "1.00948716866299470496"},
    };
    static const std::vector<NamedValue> p2 = {
        {"w0", "0.35520684553103798464"},
        {"w1", "1.22604613007355256471"},
        {"w2", "0.89895386992644732427"},
        {"w3", "1.01979315446896201536"},
    };
    static const std::vector<NamedValue> p3 = {
        {"w0", "0.26663842939298731949"},
        {"w1", "1.49175137848770456017"},
        {"w2", "0.63324862151229532881"},
        {"w3", "1.10836157060701268051"},
    };
    switch (id) {
        case SchemeId::P1: return p1;
        case SchemeId::P2: return p2;
        case SchemeId::P3: return p3;
    }
    return p1;
}

inline const std::vector<NamedValue>& aux_weights(SchemeId id) {
    static const std::vector<NamedValue> p1 = {
        {"w0p", "0.19884616467033863763"},
    };
    static const std::vector<NamedValue> p2 = {
        {"w0p", "0.01920167777297939610"},
        {"w1p", "1.30958066592489652535"},
    };
    static const std::vector<NamedValue> p3 = {
        {"w0p", "4.16532467660117156072"},
        {"w1p", "-12.33339535057290881070"},
        {"w2p", "191.24292432666243257700"},
    };
    switch (id) {
        case SchemeId::P1: return p1;
        case SchemeId::P2: return p2;
        case SchemeId::P3: return p3;
    }
    return p1;
}

inline const std::vector<NamedValue>& free_params(SchemeId id) {
    static const std::vector<NamedValue> p1 = {
        {"w0", "0.365512831337005295040"},
    };
    static const std::vector<NamedValue> p2 = {
        {"a03", "-2.92791246902036483846"},
        {"b03", "-9.83486817370072152755"},
        {"w0", "0.35520684553103798464"},
    };
    static const std::vector<NamedValue> p3 = {
        {"a03", "-2.31431720758483283618"},
        {"b03", "-8.73186685916462579371"},
        {"a13", "3.22663580200212241067"},
        {"b13", "8.92730087492692625517"},
        {"w0p", "4.16532467660117156072"},
        {"w0", "0.26663842939298731949"},
    };
    switch (id) {
        case SchemeId::P1: return p1;
        case SchemeId::P2: return p2;
        case SchemeId::P3: return p3;
    }
    return p1;
}

} // namespace tables

/// Published free parameters, parsed, in canonical order.
inline std::vector<double> bundled_free_params(SchemeId id) {
    std::vector<double> out;
    for (const auto& nv : tables::free_params(id)) out.push_back(std::strtod(nv.value, nullptr));
    return out;
}

/// Scheme built directly from the published table values (not via closure).
inline SchemeDefinition bundled_scheme(SchemeId id) {
    SchemeDefinition s;
    s.id = id;
    s.boundary.depth = closure_depth(id);
    s.interior = interior_stencil();
    s.free_params = bundled_free_params(id);

    std::map<std::string, double> coef;
    for (const auto& nv : tables::coefficients(id)) coef[nv.name] = std::strtod(nv.value, nullptr);
    for (int i = 0; i < s.depth(); ++i)
        for (int j = 0; j < 4; ++j) {
            const std::string key = std::to_string(i) + std::to_string(j);
            s.boundary.a[i][j] = coef.at("a" + key);
            s.boundary.b[i][j] = coef.at("b" + key);
        }

    const auto& wv = tables::weights(id);
    s.weights.w0 = std::strtod(wv[0].value, nullptr);
    s.weights.w1 = std::strtod(wv[1].value, nullptr);
    s.weights.w2 = std::strtod(wv[2].value, nullptr);
    s.weights.w3 = std::strtod(wv[3].value, nullptr);

    const auto& av = tables::aux_weights(id);
    for (int i = 0; i < s.depth(); ++i) s.aux_weights[i] = std::strtod(av[i].value, nullptr);
    return s;
}

} // namespace ccfd
