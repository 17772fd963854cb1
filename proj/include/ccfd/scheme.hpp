#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ccfd/errors.hpp"

namespace ccfd {

enum class SchemeId { P1, P2, P3 };

inline const char* to_string(SchemeId id) {
    switch (id) {
        case SchemeId::P1: return "P1";
        case SchemeId::P2: return "P2";
        case SchemeId::P3: return "P3";
    }
    return "?";
}

/// Number of one-sided closure rows at each boundary (l).
inline int closure_depth(SchemeId id) {
    switch (id) {
        case SchemeId::P1: return 1;
        case SchemeId::P2: return 2;
        case SchemeId::P3: return 3;
    }
    return 0;
}

inline int free_param_count(SchemeId id) {
    switch (id) {
        case SchemeId::P1: return 1;
        case SchemeId::P2: return 3;
        case SchemeId::P3: return 6;
    }
    return 0;
}

/// Canonical ordering of the free parameters accepted by close_scheme.
inline std::vector<std::string> free_param_names(SchemeId id) {
    switch (id) {
        case SchemeId::P1: return {"w0"};
        case SchemeId::P2: return {"a03", "b03", "w0"};
        case SchemeId::P3: return {"a03", "b03", "a13", "b13", "w0p", "w0"};
    }
    return {};
}

/// One implicit/explicit stencil pair: sum_m c_m f'_{i+m} = (1/h) sum_n d_n f_{i+n}.
struct StencilSpec {
    std::map<int, double> lhs_coeffs; // c_m by offset m
    std::map<int, double> rhs_coeffs; // d_n by offset n
    int order = 0;

    /// Residual of the j-th order relation  sum m^{j-1} c_m - (1/j) sum n^j d_n.
    double order_relation_residual(int j) const {
        double lhs = 0.0, rhs = 0.0;
        for (const auto& [m, c] : lhs_coeffs) lhs += std::pow(double(m), j - 1) * c;
        for (const auto& [n, d] : rhs_coeffs) rhs += std::pow(double(n), j) * d;
        return lhs - rhs / j;
    }
};

/// The fourth-order tridiagonal interior scheme.
inline StencilSpec interior_stencil() {
    StencilSpec s;
    s.lhs_coeffs = {{-1, 1.0 / 6.0}, {0, 2.0 / 3.0}, {1, 1.0 / 6.0}};
    s.rhs_coeffs = {{-1, -0.5}, {1, 0.5}};
    s.order = 4;
    return s;
}

/// One-parameter quadrature end-weight family; w0 = 3/8 gives the Gregory weights.
struct WeightFamily {
    double w0 = 0.0, w1 = 0.0, w2 = 0.0, w3 = 0.0;

    std::array<double, 4> as_array() const { return {w0, w1, w2, w3}; }
};

inline WeightFamily derived_weights(double w0) {
    return {w0, -3.0 * w0 + 55.0 / 24.0, 3.0 * w0 - 1.0 / 6.0, -w0 + 11.0 / 8.0};
}

/// Left-boundary closure rows; rows i >= depth stay zero. The right boundary
/// is never stored: it is produced by mirroring at assembly time.
struct BoundaryBlock {
    std::array<std::array<double, 4>, 3> a{};
    std::array<std::array<double, 4>, 3> b{};
    int depth = 0;
};

struct SchemeDefinition {
    SchemeId id = SchemeId::P1;
    BoundaryBlock boundary;
    StencilSpec interior;
    WeightFamily weights;
    std::array<double, 3> aux_weights{}; // w'_0 .. w'_{l-1}; interior entries are 1
    std::vector<double> free_params;     // canonical order, kept for serialization

    int depth() const { return boundary.depth; }
};

namespace detail {

/// Solves a 2x2 system by Cramer's rule; throws SingularClosure when the
/// spectral condition number exceeds 1e12.
inline void solve_2x2(const double m[2][2], const double r[2], double& x0, double& x1,
                      const char* what) {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double t = m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
    const double smax2 = 0.5 * (t + disc);
    const double smin2 = 0.5 * (t - disc);
    if (!(smin2 > 0.0) || smax2 / smin2 > 1e24)
        throw SingularClosure(std::string("singular closure system: ") + what);
    x0 = (r[0] * m[1][1] - r[1] * m[0][1]) / det;
    x1 = (m[0][0] * r[1] - m[1][0] * r[0]) / det;
}

inline void require_finite(const SchemeDefinition& s) {
    for (int i = 0; i < s.depth(); ++i)
        for (int j = 0; j < 4; ++j)
            if (!std::isfinite(s.boundary.a[i][j]) || !std::isfinite(s.boundary.b[i][j]))
                throw SingularClosure("closure produced non-finite coefficients");
    for (int i = 0; i < s.depth(); ++i)
        if (!std::isfinite(s.aux_weights[i]))
            throw SingularClosure("closure produced non-finite auxiliary weight");
}

inline SchemeDefinition close_p1(double w0) {
    const double a00 = 1.0;
    SchemeDefinition s;
    s.id = SchemeId::P1;
    s.boundary.depth = 1;
    s.interior = interior_stencil();
    s.weights = derived_weights(w0);
    s.free_params = {w0};

    const double w0p = -(4.0 / 3.0 - 8.0 * w0) / (8.0 * a00);
    if (std::abs(w0p) < 1e-14)
        throw SingularClosure("P1 closure: w0' vanishes (b00 undefined)");
    const double b00 = -1.0 / (2.0 * w0p);
    const double a03 = -a00 - (5.0 / 12.0) * b00;
    const double a01 = -5.0 * a03 - 4.0 * b00 - 8.0 * a00;
    const double a02 = -8.0 * a03 - 2.0 * b00 - 5.0 * a00;

    s.boundary.a[0] = {a00, a01, a02, a03};
    s.boundary.b[0] = {b00, -b00, 0.0, 0.0};
    s.aux_weights[0] = w0p;
    require_finite(s);
    return s;
}

inline SchemeDefinition close_p2(double a03, double b03, double w0) {
    const double a00 = 1.0, a11 = 1.0, b00 = 0.0, b11 = 0.0;
    SchemeDefinition s;
    s.id = SchemeId::P2;
    s.boundary.depth = 2;
    s.interior = interior_stencil();
    s.weights = derived_weights(w0);
    s.free_params = {a03, b03, w0};
    const double w3 = s.weights.w3;

    double w0p = 0.0, w1p = 0.0;
    const double m[2][2] = {{b00 - 2.25 * a03 + b03, -0.75 * a11 - 0.5 * b11},
                            {12.0 * a00 + 12.0 * a03 + 4.0 * b00 - 5.0 * b03, b11}};
    const double r[2] = {1.25 - 2.25 * w3, 0.5};
    solve_2x2(m, r, w0p, w1p, "P2 (w0', w1')");

    const double a13 = (w3 - 1.0 - w0p * a03) / w1p;
    const double b13 = -w0p * b03 / w1p;
    const double b01 = 12.0 * a00 + 12.0 * a03 + 4.0 * b00 - 5.0 * b03;
    const double b02 = 4.0 * b03 - 12.0 * a03 - 5.0 * b00 - 12.0 * a00;
    const double a01 = 2.0 * b03 - 5.0 * a03 - 4.0 * b00 - 8.0 * a00;
    const double a02 = 4.0 * b03 - 8.0 * a03 - 2.0 * b00 - 5.0 * a00;
    const double b10 = 2.25 * a13 - 0.75 * a11 - 0.5 * b11 - b13;
    const double b12 = 0.75 * a11 - 2.25 * a13 - 0.5 * b11;
    const double a10 = 0.25 * a11 - 1.75 * a13 + 0.25 * b11 + 0.75 * b13;
    const double a12 = 0.25 * a11 - 3.75 * a13 - 0.25 * b11 + 2.25 * b13;

    s.boundary.a[0] = {a00, a01, a02, a03};
    s.boundary.b[0] = {b00, b01, b02, b03};
    s.boundary.a[1] = {a10, a11, a12, a13};
    s.boundary.b[1] = {b10, b11, b12, b13};
    s.aux_weights = {w0p, w1p, 0.0};
    require_finite(s);
    return s;
}

inline SchemeDefinition close_p3(double a03, double b03, double a13, double b13, double w0p,
                                 double w0) {
    const double a00 = 1.0, a11 = 1.0, a22 = 1.0, b00 = 0.0, b11 = 0.0, b22 = 0.0;
    SchemeDefinition s;
    s.id = SchemeId::P3;
    s.boundary.depth = 3;
    s.interior = interior_stencil();
    s.weights = derived_weights(w0);
    s.free_params = {a03, b03, a13, b13, w0p, w0};
    const double w2 = s.weights.w2, w3 = s.weights.w3;

    double w1p = 0.0, w2p = 0.0;
    const double m[2][2] = {
        {0.25 * a11 + 0.25 * b11 + 14.25 * a13 - 11.25 * b13, 2.0 * b22 - 5.0 * a22},
        {0.25 * a11 - 3.75 * a13 - 0.25 * b11 + 2.25 * b13, a22}};
    const double r[2] = {
        w0 + 16.0 * w3 - 58.0 / 3.0 - w0p * (a00 + 16.0 * a03 - 12.0 * b03),
        w2 - 1.0 / 6.0 - w0p * (4.0 * b03 - 8.0 * a03 - 2.0 * b00 - 5.0 * a00)};
    solve_2x2(m, r, w1p, w2p, "P3 (w1', w2')");

    const double a23 = (w3 - 5.0 / 6.0 - w0p * a03 - w1p * a13) / w2p;
    const double b23 = (0.5 - w0p * b03 - w1p * b13) / w2p;
    const double b01 = 12.0 * a00 + 12.0 * a03 + 4.0 * b00 - 5.0 * b03;
    const double b02 = 4.0 * b03 - 12.0 * a03 - 5.0 * b00 - 12.0 * a00;
    const double a01 = 2.0 * b03 - 5.0 * a03 - 4.0 * b00 - 8.0 * a00;
    const double a02 = 4.0 * b03 - 8.0 * a03 - 2.0 * b00 - 5.0 * a00;
    const double b10 = 2.25 * a13 - 0.75 * a11 - 0.5 * b11 - b13;
    const double b12 = 0.75 * a11 - 2.25 * a13 - 0.5 * b11;
    const double a10 = 0.25 * a11 - 1.75 * a13 + 0.25 * b11 + 0.75 * b13;
    const double a12 = 0.25 * a11 - 3.75 * a13 - 0.25 * b11 + 2.25 * b13;
    const double b20 = 12.0 * a22 + 36.0 * a23 - 5.0 * b22 - 28.0 * b23;
    const double b21 = 4.0 * b22 - 36.0 * a23 - 12.0 * a22 + 27.0 * b23;
    const double a20 = 2.0 * b22 - 16.0 * a23 - 5.0 * a22 + 12.0 * b23;
    const double a21 = 4.0 * b22 - 21.0 * a23 - 8.0 * a22 + 18.0 * b23;

    s.boundary.a[0] = {a00, a01, a02, a03};
    s.boundary.b[0] = {b00, b01, b02, b03};
    s.boundary.a[1] = {a10, a11, a12, a13};
    s.boundary.b[1] = {b10, b11, b12, b13};
    s.boundary.a[2] = {a20, a21, a22, a23};
    s.boundary.b[2] = {b20, b21, b22, b23};
    s.aux_weights = {w0p, w1p, w2p};
    require_finite(s);
    return s;
}

} // namespace detail

/// Closes a scheme from its free parameters (canonical order, see
/// free_param_names). The dependent coefficients follow by explicit
/// substitution; the 2x2 auxiliary-weight systems are solved first.
inline SchemeDefinition close_scheme(SchemeId id, std::span<const double> free_params) {
    if (static_cast<int>(free_params.size()) != free_param_count(id))
        throw InvalidParamCount(std::string(to_string(id)) + " expects " +
                                std::to_string(free_param_count(id)) + " free parameters, got " +
                                std::to_string(free_params.size()));
    switch (id) {
        case SchemeId::P1: return detail::close_p1(free_params[0]);
        case SchemeId::P2: return detail::close_p2(free_params[0], free_params[1], free_params[2]);
        case SchemeId::P3:
            return detail::close_p3(free_params[0], free_params[1], free_params[2], free_params[3],
                                    free_params[4], free_params[5]);
    }
    throw InvalidParamCount("unknown scheme id");
}

inline SchemeDefinition close_scheme(SchemeId id, std::initializer_list<double> p) {
    return close_scheme(id, std::span<const double>(p.begin(), p.size()));
}

// -------------------------------------------------------------------------
// Order verification

struct OrderConditionReport {
    struct Entry {
        int node;      // boundary row index, or -1 for the interior relations
        int condition; // Taylor condition q (boundary) or order relation j (interior)
        double residual;
    };
    std::vector<Entry> entries;
    double max_residual = 0.0;

    bool pass(double tol = 1e-10) const { return max_residual <= tol; }
};

namespace detail {
inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}
} // namespace detail

/// Residual of Taylor condition q at boundary node i:
///   q = 0:   sum_j b_ij = 0
///   q >= 1:  sum_j a_ij (j-i)^{q-1}/(q-1)!  -  sum_j b_ij (j-i)^q/q! = 0
inline double taylor_condition_residual(const BoundaryBlock& blk, int node, int q) {
    double lhs = 0.0, rhs = 0.0;
    for (int j = 0; j < 4; ++j) {
        const double off = j - node;
        if (q >= 1) lhs += blk.a[node][j] * std::pow(off, q - 1) / detail::factorial(q - 1);
        rhs += blk.b[node][j] * std::pow(off, q) / detail::factorial(q);
    }
    return lhs - rhs;
}

/// Evaluates the four Taylor conditions at every used boundary row plus the
/// four interior order relations; a scheme passes at 1e-10.
inline OrderConditionReport verify_order_conditions(const SchemeDefinition& s) {
    OrderConditionReport rep;
    for (int i = 0; i < s.depth(); ++i)
        for (int q = 0; q <= 3; ++q) {
            const double r = taylor_condition_residual(s.boundary, i, q);
            rep.entries.push_back({i, q, r});
        }
    for (int j = 1; j <= s.interior.order; ++j)
        rep.entries.push_back({-1, j, s.interior.order_relation_residual(j)});
    for (const auto& e : rep.entries)
        rep.max_residual = std::max(rep.max_residual, std::abs(e.residual));
    return rep;
}

// -------------------------------------------------------------------------
// Taylor-condition coefficient matrices. Writing the four conditions at node
// i as  A_i (a_i0..a_i3)^T = B_i (b_i0..b_i3)^T, the product B_i^{-1} A_i is
// the same 4x4 constant for i = 0, 1, 2: its columns are the third-order
// one-sided derivative stencils.

inline std::array<std::array<double, 4>, 4> taylor_lhs_matrix(int node) {
    std::array<std::array<double, 4>, 4> m{};
    for (int q = 0; q <= 3; ++q)
        for (int j = 0; j < 4; ++j)
            m[q][j] = q == 0 ? 0.0 : std::pow(double(j - node), q - 1) / detail::factorial(q - 1);
    return m;
}

inline std::array<std::array<double, 4>, 4> taylor_rhs_matrix(int node) {
    std::array<std::array<double, 4>, 4> m{};
    for (int q = 0; q <= 3; ++q)
        for (int j = 0; j < 4; ++j)
            m[q][j] = std::pow(double(j - node), q) / detail::factorial(q);
    return m;
}

/// The constant map b_i = C a_i implied by the Taylor conditions.
inline std::array<std::array<double, 4>, 4> taylor_coefficient_map() {
    return {{{-11.0 / 6.0, -1.0 / 3.0, 1.0 / 6.0, -1.0 / 3.0},
             {3.0, -0.5, -1.0, 1.5},
             {-1.5, 1.0, 0.5, -3.0},
             {1.0 / 3.0, -1.0 / 6.0, 1.0 / 3.0, 11.0 / 6.0}}};
}

} // namespace ccfd
