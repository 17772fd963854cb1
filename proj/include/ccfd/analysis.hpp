#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "ccfd/errors.hpp"
#include "ccfd/grid.hpp"
#include "ccfd/matrices.hpp"
#include "ccfd/runtime.hpp"
#include "ccfd/scheme.hpp"

namespace ccfd {

/// Node selector for the wavenumber analysis: 0..depth-1 or interior_node.
inline constexpr int interior_node = -1;

/// Pseudo-wavenumber of the scheme row at the given node for frequency
/// omega in (0, pi]. The interior stencil gives the real 3 sin w / (2 + cos w);
/// a boundary row i gives (A + iB) / (i (C + iD)) with
///   A + iB = sum_j b_ij e^{i w (j-i)},   C + iD = sum_j a_ij e^{i w (j-i)}.
inline std::complex<double> modified_wavenumber(const SchemeDefinition& s, int node,
                                                double omega) {
    if (!(omega > 0.0) || omega > std::numbers::pi + 1e-12)
        throw std::invalid_argument("omega must lie in (0, pi]");
    if (node == interior_node) return {3.0 * std::sin(omega) / (2.0 + std::cos(omega)), 0.0};
    if (node < 0 || node >= s.depth())
        throw std::invalid_argument("node index outside scheme depth");
    std::complex<double> num(0.0, 0.0), den(0.0, 0.0);
    for (int j = 0; j < 4; ++j) {
        const double phase = omega * (j - node);
        const std::complex<double> e(std::cos(phase), std::sin(phase));
        num += s.boundary.b[node][j] * e;
        den += s.boundary.a[node][j] * e;
    }
    if (std::abs(den) < 1e-14) {
        std::ostringstream msg;
        msg << "pseudo-wavenumber pole at node " << node << ", omega = " << omega;
        throw DenominatorVanishes(msg.str());
    }
    return num / (std::complex<double>(0.0, 1.0) * den);
}

/// The uniform frequency grid delta, 2*delta, ..., floor(pi/delta)*delta.
inline std::vector<double> make_omega_grid(double delta = 0.01) {
    const int count = int(std::floor(std::numbers::pi / delta + 1e-12));
    std::vector<double> grid(count);
    for (int k = 0; k < count; ++k) grid[k] = delta * (k + 1);
    return grid;
}

struct WavenumberResponse {
    int node_index = interior_node;
    std::vector<double> omega_grid;
    std::vector<std::complex<double>> omega_bar;
};

inline WavenumberResponse sample_response(const SchemeDefinition& s, int node,
                                          const std::vector<double>& grid) {
    WavenumberResponse r;
    r.node_index = node;
    r.omega_grid = grid;
    r.omega_bar.reserve(grid.size());
    for (double w : grid) r.omega_bar.push_back(modified_wavenumber(s, node, w));
    return r;
}

struct ResolutionErrorCurves {
    std::vector<double> eps_r; // dispersive |Re(wbar) - w| / w
    std::vector<double> eps_i; // dissipative |Im(wbar)| / w
};

inline ResolutionErrorCurves resolution_errors(const WavenumberResponse& r) {
    ResolutionErrorCurves c;
    c.eps_r.reserve(r.omega_grid.size());
    c.eps_i.reserve(r.omega_grid.size());
    for (std::size_t k = 0; k < r.omega_grid.size(); ++k) {
        const double w = r.omega_grid[k];
        c.eps_r.push_back(std::abs(r.omega_bar[k].real() - w) / w);
        c.eps_i.push_back(std::abs(r.omega_bar[k].imag()) / w);
    }
    return c;
}

/// First grid frequency with eps >= sigma, if any.
inline std::optional<double> first_crossing(const std::vector<double>& grid,
                                            const std::vector<double>& eps, double sigma) {
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (eps[k] >= sigma) return grid[k];
    return std::nullopt;
}

struct CriticalFrequency {
    double omega_r = 0.0;
    double omega_i = 0.0;
    double omega = 0.0; // (omega_r + omega_i) / 2
};

inline CriticalFrequency critical_frequency(const std::vector<double>& grid,
                                            const ResolutionErrorCurves& curves, double sigma) {
    const auto wr = first_crossing(grid, curves.eps_r, sigma);
    const auto wi = first_crossing(grid, curves.eps_i, sigma);
    if (!wr) throw NoCrossing("dispersive error never reaches sigma");
    if (!wi) throw NoCrossing("dissipative error never reaches sigma");
    return {*wr, *wi, 0.5 * (*wr + *wi)};
}

inline constexpr std::array<double, 3> resolution_sigmas{0.003, 0.002, 0.001};

struct ResolutionReport {
    struct NodeEntry {
        int node_index = 0;
        double sigma = 0.0;
        WavenumberResponse response;
        ResolutionErrorCurves curves;
        std::optional<CriticalFrequency> critical; // empty on NoCrossing
    };
    std::vector<NodeEntry> per_node;
    std::array<double, 3> sigmas = resolution_sigmas;
    std::optional<double> omega_f; // empty when any node is infeasible
};

/// Evaluates every boundary node on the delta-grid, pairs node i with
/// sigma_i, and averages the per-node critical frequencies. A missing
/// crossing marks the scheme infeasible instead of raising.
inline ResolutionReport average_resolution(const SchemeDefinition& s, double delta = 0.01) {
    ResolutionReport rep;
    const auto grid = make_omega_grid(delta);
    double sum = 0.0;
    bool feasible = true;
    for (int node = 0; node < s.depth(); ++node) {
        ResolutionReport::NodeEntry e;
        e.node_index = node;
        e.sigma = resolution_sigmas[node];
        e.response = sample_response(s, node, grid);
        e.curves = resolution_errors(e.response);
        const auto wr = first_crossing(grid, e.curves.eps_r, e.sigma);
        const auto wi = first_crossing(grid, e.curves.eps_i, e.sigma);
        if (wr && wi) {
            e.critical = CriticalFrequency{*wr, *wi, 0.5 * (*wr + *wi)};
            sum += e.critical->omega;
        } else {
            feasible = false;
        }
        rep.per_node.push_back(std::move(e));
    }
    if (feasible && !rep.per_node.empty()) rep.omega_f = sum / double(rep.per_node.size());
    return rep;
}

// -------------------------------------------------------------------------
// Asymptotic stability

struct StabilityReport {
    int n = 0;
    std::vector<std::complex<double>> eigenvalues;
    double max_real_part = 0.0;
};

/// Spectrum of the reduced evolution operator for the unit-speed advection
/// IBVP on n intervals, h = 1: D = A^{-1} B, drop row/column 0, Q = -D_red.
/// Pass algorithm1_sign = true for the unnegated literal variant.
inline StabilityReport stability_spectrum(const SchemeDefinition& s, int n,
                                          bool algorithm1_sign = false) {
    const Grid grid = Grid::uniform(n, double(n)); // h = 1
    const SchemeMatrices m = assemble_matrices(s, grid);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m.a_matrix);
    const Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
    if (udiag.minCoeff() <= 1e-14 * udiag.maxCoeff())
        throw SingularA("A is singular on the stability grid");
    Eigen::MatrixXd d = lu.solve(m.b_matrix);
    Eigen::MatrixXd q = d.block(1, 1, n, n);
    if (!algorithm1_sign) q = -q;

    Eigen::EigenSolver<Eigen::MatrixXd> es(q, /*computeEigenvectors=*/false);
    StabilityReport rep;
    rep.n = n;
    rep.eigenvalues.reserve(n);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const std::complex<double> lam = es.eigenvalues()(k);
        rep.eigenvalues.push_back(lam);
        worst = std::max(worst, lam.real());
    }
    rep.max_real_part = worst;
    return rep;
}

// -------------------------------------------------------------------------
// Empirical algebraic precision of the induced quadrature

/// Largest degree p such that h sum w_i x_i^q integrates x^q exactly on
/// [0, 1] (within 1e-10) for every q <= p; -1 when even constants fail.
inline int quadrature_precision(const WeightFamily& w, int n, int max_degree = 12) {
    if (n < 8) throw std::invalid_argument("quadrature precision needs n >= 8");
    const double h = 1.0 / n;
    std::vector<double> weights(n + 1, 1.0);
    const auto wv = w.as_array();
    for (int i = 0; i < 4; ++i) {
        weights[i] = wv[i];
        weights[n - i] = wv[i];
    }
    int degree = -1;
    for (int p = 0; p <= max_degree; ++p) {
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) acc += weights[i] * std::pow(double(i) * h, p);
        acc *= h;
        if (std::abs(acc - 1.0 / (p + 1)) <= 1e-10)
            degree = p;
        else
            break;
    }
    return degree;
}

inline int quadrature_precision(const SchemeDefinition& s, int n) {
    return quadrature_precision(s.weights, n);
}

// -------------------------------------------------------------------------
// CSV emission (feeds the resolution and spectrum figures)

/// Columns: node,omega,re_omega_bar,im_omega_bar,eps_R,eps_I. Boundary nodes
/// first, then the interior response as node -1.
inline std::string resolution_csv(const SchemeDefinition& s, double delta = 0.01) {
    std::ostringstream out;
    out.precision(17);
    out << "node,omega,re_omega_bar,im_omega_bar,eps_R,eps_I\n";
    const auto grid = make_omega_grid(delta);
    auto emit = [&](int node) {
        const auto resp = sample_response(s, node, grid);
        const auto curves = resolution_errors(resp);
        for (std::size_t k = 0; k < grid.size(); ++k)
            out << node << ',' << grid[k] << ',' << resp.omega_bar[k].real() << ','
                << resp.omega_bar[k].imag() << ',' << curves.eps_r[k] << ',' << curves.eps_i[k]
                << '\n';
    };
    for (int node = 0; node < s.depth(); ++node) emit(node);
    emit(interior_node);
    return out.str();
}

/// Columns: re_lambda,im_lambda,n.
inline std::string spectrum_csv(const StabilityReport& rep) {
    std::ostringstream out;
    out.precision(17);
    out << "re_lambda,im_lambda,n\n";
    for (const auto& lam : rep.eigenvalues)
        out << lam.real() << ',' << lam.imag() << ',' << rep.n << '\n';
    return out.str();
}

} // namespace ccfd
