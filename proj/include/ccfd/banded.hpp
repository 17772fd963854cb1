#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <vector>

#include "ccfd/errors.hpp"

namespace ccfd {

/// LU factorization of a band matrix with kl sub- and ku superdiagonals,
/// partial pivoting. Band storage follows the LAPACK layout: entry (i, j)
/// lives at ab[kl+ku+i-j][j]; pivoting fills in up to kl extra
/// superdiagonals, so ab has 2*kl+ku+1 rows.
class BandedLU {
public:
    BandedLU(const Eigen::MatrixXd& dense, int kl, int ku) : n_(int(dense.rows())), kl_(kl), ku_(ku) {
        const int width = 2 * kl_ + ku_ + 1;
        ab_.assign(std::size_t(width) * n_, 0.0);
        pivot_.assign(n_, 0);
        orig_.assign(std::size_t(kl_ + ku_ + 1) * n_, 0.0);
        double amax = 0.0;
        for (int j = 0; j < n_; ++j)
            for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) {
                at(i, j) = dense(i, j);
                orig_[std::size_t(ku_ + i - j) * n_ + j] = dense(i, j);
                amax = std::max(amax, std::abs(dense(i, j)));
            }
        factor(amax);
    }

    int size() const { return n_; }

    /// Substitution sweeps plus one step of iterative refinement: pivoting is
    /// restricted to the band, and the refinement recovers dense-LU-quality
    /// residuals for ill-conditioned boundary rows.
    void solve_in_place(std::span<double> x) const {
        if (int(x.size()) != n_) throw LengthMismatch("banded solve: rhs length mismatch");
        std::vector<double> rhs(x.begin(), x.end());
        sweep(x);
        std::vector<double> r(n_);
        residual(rhs, x, r);
        sweep(r);
        for (int i = 0; i < n_; ++i) x[i] += r[i];
    }

    std::vector<double> solve(std::span<const double> rhs) const {
        std::vector<double> x(rhs.begin(), rhs.end());
        solve_in_place(x);
        return x;
    }

private:
    void sweep(std::span<double> x) const {
        // forward elimination with row swaps
        for (int j = 0; j < n_ - 1; ++j) {
            if (pivot_[j] != j) std::swap(x[j], x[pivot_[j]]);
            const int km = std::min(kl_, n_ - 1 - j);
            for (int p = 1; p <= km; ++p) x[j + p] -= at(j + p, j) * x[j];
        }
        // back substitution against the widened U band
        const int uw = kl_ + ku_;
        for (int j = n_ - 1; j >= 0; --j) {
            x[j] /= at(j, j);
            for (int i = std::max(0, j - uw); i < j; ++i) x[i] -= at(i, j) * x[j];
        }
    }

    /// r = rhs - A x using the stored original band.
    void residual(const std::vector<double>& rhs, std::span<const double> x,
                  std::vector<double>& r) const {
        for (int i = 0; i < n_; ++i) {
            double acc = rhs[i];
            const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
            for (int j = j0; j <= j1; ++j)
                acc -= orig_[std::size_t(ku_ + i - j) * n_ + j] * x[j];
            r[i] = acc;
        }
    }
    double& at(int i, int j) { return ab_[std::size_t(kl_ + ku_ + i - j) * n_ + j]; }
    double at(int i, int j) const { return ab_[std::size_t(kl_ + ku_ + i - j) * n_ + j]; }

    void factor(double amax) {
        const int uw = kl_ + ku_; // U bandwidth after pivoting
        const double tiny = std::max(amax, 1.0) * 1e-14;
        for (int j = 0; j < n_; ++j) {
            const int km = std::min(kl_, n_ - 1 - j);
            int jp = 0;
            for (int p = 1; p <= km; ++p)
                if (std::abs(at(j + p, j)) > std::abs(at(j + jp, j))) jp = p;
            pivot_[j] = j + jp;
            if (std::abs(at(j + jp, j)) <= tiny * 1e-2 || at(j + jp, j) == 0.0)
                throw SingularA("banded factorization hit a vanishing pivot at column " +
                                std::to_string(j));
            if (jp != 0) {
                const int cend = std::min(n_ - 1, j + uw);
                for (int c = j; c <= cend; ++c) std::swap(at(j, c), at(j + jp, c));
            }
            const double d = at(j, j);
            for (int p = 1; p <= km; ++p) {
                const double mlt = at(j + p, j) / d;
                at(j + p, j) = mlt;
                const int cend = std::min(n_ - 1, j + uw);
                for (int c = j + 1; c <= cend; ++c) at(j + p, c) -= mlt * at(j, c);
            }
        }
    }

    int n_, kl_, ku_;
    std::vector<double> ab_;
    std::vector<double> orig_; // unfactored band, kept for the refinement residual
    std::vector<int> pivot_;
};

/// Reusable solver for a cyclic tridiagonal system with constant stencil
/// (sub, diag, sup) and matching corner entries, via the Sherman-Morrison
/// correction around a Thomas factorization.
class CyclicTridiagonal {
public:
    CyclicTridiagonal(double sub, double diag, double sup, int n)
        : n_(n), sub_(sub), sup_(sup) {
        if (n < 3) throw LengthMismatch("cyclic tridiagonal needs n >= 3");
        gamma_ = -diag;
        std::vector<double> d(n, diag);
        d[0] = diag - gamma_;
        d[n - 1] = diag - sub * sup / gamma_;
        // Thomas factorization of the rank-one-corrected matrix
        lfac_.resize(n);
        ufac_.resize(n);
        ufac_[0] = d[0];
        for (int i = 1; i < n; ++i) {
            lfac_[i] = sub_ / ufac_[i - 1];
            ufac_[i] = d[i] - lfac_[i] * sup_;
        }
        std::vector<double> u(n, 0.0);
        u[0] = gamma_;
        u[n - 1] = sup; // bottom-left corner entry
        z_ = u;
        thomas(z_);
        denom_ = 1.0 + z_[0] + (sub / gamma_) * z_[n - 1];
        if (std::abs(denom_) < 1e-300) throw SingularA("cyclic tridiagonal is singular");
    }

    void solve_in_place(std::span<double> x) const {
        if (int(x.size()) != n_) throw LengthMismatch("cyclic solve: rhs length mismatch");
        thomas(x);
        const double fac = (x[0] + (sub_ / gamma_) * x[n_ - 1]) / denom_;
        for (int i = 0; i < n_; ++i) x[i] -= fac * z_[i];
    }

private:
    void thomas(std::span<double> x) const {
        for (int i = 1; i < n_; ++i) x[i] -= lfac_[i] * x[i - 1];
        x[n_ - 1] /= ufac_[n_ - 1];
        for (int i = n_ - 2; i >= 0; --i) x[i] = (x[i] - sup_ * x[i + 1]) / ufac_[i];
    }

    int n_;
    double sub_, sup_, gamma_, denom_;
    std::vector<double> lfac_, ufac_, z_;
};

} // namespace ccfd
