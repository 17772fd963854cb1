#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ccfd/errors.hpp"
#include "ccfd/grid.hpp"
#include "ccfd/scheme.hpp"

namespace ccfd {

/// The operator pair A F' = (1/h) B F on a concrete grid, with the quadrature
/// weights W and auxiliary weights W'.
struct SchemeMatrices {
    Eigen::MatrixXd a_matrix;
    Eigen::MatrixXd b_matrix;
    Eigen::VectorXd w_vector;
    Eigen::VectorXd wprime_vector;
    int n_intervals = 0;
    int depth = 0;
};

/// Populates A, B, W, W'. Right-boundary rows are mirrored images of the
/// stored left block: a[N-i][N-j] = a[i][j], b[N-i][N-j] = -b[i][j],
/// w[N-i] = w[i] (condition C2); they are generated here, never stored.
inline SchemeMatrices assemble_matrices(const SchemeDefinition& s, const Grid& grid) {
    const int N = grid.n_intervals;
    const int l = s.depth();
    if (N < 2 * l + 5)
        throw GridTooSmall("need at least " + std::to_string(2 * l + 5) + " intervals for " +
                           to_string(s.id) + ", got " + std::to_string(N));

    SchemeMatrices m;
    m.n_intervals = N;
    m.depth = l;
    m.a_matrix = Eigen::MatrixXd::Zero(N + 1, N + 1);
    m.b_matrix = Eigen::MatrixXd::Zero(N + 1, N + 1);

    for (int i = l; i <= N - l; ++i) {
        for (const auto& [off, c] : s.interior.lhs_coeffs) m.a_matrix(i, i + off) = c;
        for (const auto& [off, d] : s.interior.rhs_coeffs) m.b_matrix(i, i + off) = d;
    }
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < 4; ++j) {
            m.a_matrix(i, j) = s.boundary.a[i][j];
            m.b_matrix(i, j) = s.boundary.b[i][j];
            m.a_matrix(N - i, N - j) = s.boundary.a[i][j];
            m.b_matrix(N - i, N - j) = -s.boundary.b[i][j];
        }

    m.w_vector = Eigen::VectorXd::Ones(N + 1);
    const auto wv = s.weights.as_array();
    for (int i = 0; i < 4; ++i) {
        m.w_vector(i) = wv[i];
        m.w_vector(N - i) = wv[i];
    }
    m.wprime_vector = Eigen::VectorXd::Ones(N + 1);
    for (int i = 0; i < l; ++i) {
        m.wprime_vector(i) = s.aux_weights[i];
        m.wprime_vector(N - i) = s.aux_weights[i];
    }
    return m;
}

struct ConservationIdentityReport {
    double weight_residual = 0.0; // ||W'A - W||_inf
    double flux_residual = 0.0;   // ||W'B - [-1,0,...,0,1]||_inf

    bool pass(double tol = 1e-10) const {
        return weight_residual <= tol && flux_residual <= tol;
    }
};

/// Checks W'A = W and W'B = [-1,0,...,0,1]. Pure verification: residuals are
/// reported, never enforced.
inline ConservationIdentityReport verify_conservation_identities(const SchemeMatrices& m) {
    const int N = m.n_intervals;
    Eigen::RowVectorXd wa = m.wprime_vector.transpose() * m.a_matrix;
    Eigen::RowVectorXd wb = m.wprime_vector.transpose() * m.b_matrix;
    Eigen::RowVectorXd target = Eigen::RowVectorXd::Zero(N + 1);
    target(0) = -1.0;
    target(N) = 1.0;
    ConservationIdentityReport rep;
    rep.weight_residual = (wa - m.w_vector.transpose()).cwiseAbs().maxCoeff();
    rep.flux_residual = (wb - target).cwiseAbs().maxCoeff();
    return rep;
}

} // namespace ccfd
