#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "ccfd/banded.hpp"
#include "ccfd/errors.hpp"
#include "ccfd/matrices.hpp"
#include "ccfd/runtime.hpp"

namespace ccfd {

/// Applies the compact first derivative F' = A^{-1} (B F) / h with a cached
/// banded factorization of A. Immutable after construction; apply is pure.
class DerivativeOperator {
public:
    DerivativeOperator(const SchemeMatrices& m, double h)
        : n_(m.n_intervals + 1), h_(h), lu_(std::make_shared<BandedLU>(m.a_matrix, 3, 3)) {
        if (!(h > 0.0)) throw std::invalid_argument("spacing must be positive");
        // B has the same bandwidth; keep it as 7 bands per row for O(N) products.
        bband_.assign(std::size_t(n_) * 7, 0.0);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < 7; ++k) {
                const int j = i - 3 + k;
                if (j >= 0 && j < n_) bband_[std::size_t(i) * 7 + k] = m.b_matrix(i, j);
            }
    }

    int nodes() const { return n_; }
    double spacing() const { return h_; }

    void apply(std::span<const double> f, std::span<double> df) const {
        if (int(f.size()) != n_ || int(df.size()) != n_)
            throw LengthMismatch("apply: expected length " + std::to_string(n_));
        multiply_b(f, df);
        lu_->solve_in_place(df);
        const double inv_h = 1.0 / h_;
        for (auto& v : df) v *= inv_h;
    }

    std::vector<double> apply(std::span<const double> f) const {
        std::vector<double> df(f.size());
        apply(f, df);
        return df;
    }

    /// B f without the A solve or the 1/h scaling.
    void multiply_b(std::span<const double> f, std::span<double> out) const {
        for (int i = 0; i < n_; ++i) {
            const double* row = &bband_[std::size_t(i) * 7];
            double acc = 0.0;
            const int k0 = std::max(0, 3 - i);
            const int k1 = std::min(6, n_ - 1 + 3 - i);
            for (int k = k0; k <= k1; ++k) acc += row[k] * f[std::size_t(i - 3 + k)];
            out[i] = acc;
        }
    }

private:
    int n_;
    double h_;
    std::shared_ptr<BandedLU> lu_;
    std::vector<double> bband_;
};

inline DerivativeOperator build_operator(const SchemeMatrices& m, double h) {
    return DerivativeOperator(m, h);
}

/// Periodic variant: the interior stencil wraps around, no boundary closures.
/// Used for the periodic direction of 2D runs.
class PeriodicDerivativeOperator {
public:
    PeriodicDerivativeOperator(int n, double h)
        : n_(n), h_(h), solver_(std::make_shared<CyclicTridiagonal>(1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, n)) {
        if (!(h > 0.0)) throw std::invalid_argument("spacing must be positive");
    }

    int nodes() const { return n_; }
    double spacing() const { return h_; }

    void apply(std::span<const double> f, std::span<double> df) const {
        if (int(f.size()) != n_ || int(df.size()) != n_)
            throw LengthMismatch("periodic apply: expected length " + std::to_string(n_));
        for (int i = 0; i < n_; ++i) {
            const double fm = f[(i + n_ - 1) % n_];
            const double fp = f[(i + 1) % n_];
            df[i] = 0.5 * (fp - fm);
        }
        solver_->solve_in_place(df);
        const double inv_h = 1.0 / h_;
        for (auto& v : df) v *= inv_h;
    }

    std::vector<double> apply(std::span<const double> f) const {
        std::vector<double> df(f.size());
        apply(f, df);
        return df;
    }

private:
    int n_;
    double h_;
    std::shared_ptr<CyclicTridiagonal> solver_;
};

// -------------------------------------------------------------------------
// 2D fields, stored row-major with x the fastest axis.

struct Field2D {
    int nx = 0, ny = 0;
    std::vector<double> v;

    Field2D() = default;
    Field2D(int nx_, int ny_, double fill = 0.0) : nx(nx_), ny(ny_), v(std::size_t(nx_) * ny_, fill) {}

    double& at(int i, int j) { return v[std::size_t(j) * nx + i]; }
    double at(int i, int j) const { return v[std::size_t(j) * nx + i]; }
    std::size_t size() const { return v.size(); }
};

enum class Axis { X, Y };

/// Differentiates the field along one axis by applying the matching 1D
/// operator to every grid line. Lines are disjoint, so they may be processed
/// concurrently; results do not depend on the schedule.
inline Field2D apply_along_axis(const DerivativeOperator& op_x, const DerivativeOperator& op_y,
                                const Field2D& f, Axis axis) {
    Field2D out(f.nx, f.ny);
    if (axis == Axis::X) {
        if (op_x.nodes() != f.nx) throw ShapeMismatch("x operator does not match field width");
        parallel_for(f.ny, [&](int j) {
            std::span<const double> line(&f.v[std::size_t(j) * f.nx], std::size_t(f.nx));
            std::span<double> dst(&out.v[std::size_t(j) * f.nx], std::size_t(f.nx));
            op_x.apply(line, dst);
        });
    } else {
        if (op_y.nodes() != f.ny) throw ShapeMismatch("y operator does not match field height");
        parallel_for(f.nx, [&](int i) {
            std::vector<double> line(f.ny), dst(f.ny);
            for (int j = 0; j < f.ny; ++j) line[j] = f.at(i, j);
            op_y.apply(line, dst);
            for (int j = 0; j < f.ny; ++j) out.at(i, j) = dst[j];
        });
    }
    return out;
}

/// Same per-line application with a periodic operator on the y axis.
inline Field2D apply_dy_periodic(const PeriodicDerivativeOperator& op_y, const Field2D& f) {
    if (op_y.nodes() != f.ny) throw ShapeMismatch("periodic y operator does not match field height");
    Field2D out(f.nx, f.ny);
    parallel_for(f.nx, [&](int i) {
        std::vector<double> line(f.ny), dst(f.ny);
        for (int j = 0; j < f.ny; ++j) line[j] = f.at(i, j);
        op_y.apply(line, dst);
        for (int j = 0; j < f.ny; ++j) out.at(i, j) = dst[j];
    });
    return out;
}

inline Field2D apply_dx(const DerivativeOperator& op_x, const Field2D& f) {
    return apply_along_axis(op_x, op_x, f, Axis::X);
}

} // namespace ccfd
