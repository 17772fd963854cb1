#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "ccfd/errors.hpp"
#include "ccfd/runtime.hpp"
#include "ccfd/scheme.hpp"
#include "ccfd/tables.hpp"

namespace ccfd {

/// A scheme as stored on disk: coefficients plus provenance and metadata.
struct SchemeFile {
    SchemeDefinition scheme;
    std::string provenance = "table"; // "table" or "optimized"
    nlohmann::json meta = nlohmann::json::object();
};

namespace detail {

inline std::string format_decimal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_decimal(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw SchemeFileError("scheme file is missing \"" + key + "\"");
    const auto& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        char* end = nullptr;
        const double d = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || (end && *end != '\0'))
            throw SchemeFileError("cannot parse \"" + key + "\" = \"" + s + "\" as a number");
        return d;
    }
    throw SchemeFileError("entry \"" + key + "\" must be a number or a decimal string");
}

inline SchemeId parse_scheme_id(const std::string& s) {
    if (s == "P1") return SchemeId::P1;
    if (s == "P2") return SchemeId::P2;
    if (s == "P3") return SchemeId::P3;
    throw SchemeFileError("unknown scheme_id \"" + s + "\"");
}

} // namespace detail

inline nlohmann::json to_json(const SchemeFile& file) {
    const SchemeDefinition& s = file.scheme;
    nlohmann::json j;
    j["scheme_id"] = to_string(s.id);

    nlohmann::json fp = nlohmann::json::object();
    const auto names = free_param_names(s.id);
    for (std::size_t k = 0; k < names.size() && k < s.free_params.size(); ++k)
        fp[names[k]] = detail::format_decimal(s.free_params[k]);
    j["free_params"] = fp;

    nlohmann::json coef = nlohmann::json::object();
    for (int i = 0; i < s.depth(); ++i)
        for (int jj = 0; jj < 4; ++jj) {
            const std::string key = std::to_string(i) + std::to_string(jj);
            coef["a" + key] = detail::format_decimal(s.boundary.a[i][jj]);
            coef["b" + key] = detail::format_decimal(s.boundary.b[i][jj]);
        }
    j["coefficients"] = coef;

    j["weights"] = {{"w0", detail::format_decimal(s.weights.w0)},
                    {"w1", detail::format_decimal(s.weights.w1)},
                    {"w2", detail::format_decimal(s.weights.w2)},
                    {"w3", detail::format_decimal(s.weights.w3)}};

    nlohmann::json aux = nlohmann::json::object();
    static const char* aux_names[3] = {"w0p", "w1p", "w2p"};
    for (int i = 0; i < s.depth(); ++i) aux[aux_names[i]] = detail::format_decimal(s.aux_weights[i]);
    j["aux_weights"] = aux;

    j["provenance"] = file.provenance;
    j["meta"] = file.meta;
    return j;
}

inline SchemeFile scheme_from_json(const nlohmann::json& j) {
    SchemeFile file;
    if (!j.contains("scheme_id") || !j.at("scheme_id").is_string())
        throw SchemeFileError("scheme file is missing \"scheme_id\"");
    SchemeDefinition s;
    s.id = detail::parse_scheme_id(j.at("scheme_id").get<std::string>());
    s.boundary.depth = closure_depth(s.id);
    s.interior = interior_stencil();

    if (!j.contains("coefficients")) throw SchemeFileError("scheme file is missing \"coefficients\"");
    const auto& coef = j.at("coefficients");
    for (int i = 0; i < s.depth(); ++i)
        for (int jj = 0; jj < 4; ++jj) {
            const std::string key = std::to_string(i) + std::to_string(jj);
            s.boundary.a[i][jj] = detail::parse_decimal(coef, "a" + key);
            s.boundary.b[i][jj] = detail::parse_decimal(coef, "b" + key);
        }

    if (!j.contains("weights")) throw SchemeFileError("scheme file is missing \"weights\"");
    const auto& wv = j.at("weights");
    s.weights.w0 = detail::parse_decimal(wv, "w0");
    s.weights.w1 = detail::parse_decimal(wv, "w1");
    s.weights.w2 = detail::parse_decimal(wv, "w2");
    s.weights.w3 = detail::parse_decimal(wv, "w3");

    if (!j.contains("aux_weights")) throw SchemeFileError("scheme file is missing \"aux_weights\"");
    static const char* aux_names[3] = {"w0p", "w1p", "w2p"};
    for (int i = 0; i < s.depth(); ++i)
        s.aux_weights[i] = detail::parse_decimal(j.at("aux_weights"), aux_names[i]);

    if (j.contains("free_params")) {
        const auto names = free_param_names(s.id);
        const auto& fp = j.at("free_params");
        for (const auto& name : names)
            if (fp.contains(name)) s.free_params.push_back(detail::parse_decimal(fp, name));
    }

    file.scheme = s;
    file.provenance = j.value("provenance", std::string("table"));
    file.meta = j.value("meta", nlohmann::json::object());
    return file;
}

inline SchemeFile load_scheme_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemeFileError("cannot open scheme file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemeFileError("malformed scheme file " + path.string() + ": " + e.what());
    }
    return scheme_from_json(j);
}

inline void save_scheme_file(const std::filesystem::path& path, const SchemeFile& file) {
    write_file_atomic(path, to_json(file).dump(2) + "\n");
}

} // namespace ccfd
