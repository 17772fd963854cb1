#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ccfd/analysis.hpp"
#include "ccfd/errors.hpp"
#include "ccfd/scheme.hpp"

namespace ccfd {

/// Search box for one scheme's free parameters. The paper's open intervals
/// are shrunk by 1e-9 to closed boxes.
struct OptimizationProblem {
    SchemeId scheme_id = SchemeId::P1;
    std::vector<std::pair<double, double>> bounds;
    int n_for_stability = 100; // intervals of the stability grid inside the objective
    std::array<double, 3> sigmas = resolution_sigmas;
    bool algorithm1_sign = false; // literal Algorithm-1 eigenvalue convention

    static OptimizationProblem standard(SchemeId id) {
        OptimizationProblem p;
        p.scheme_id = id;
        const double eps = 1e-9;
        const std::pair<double, double> w0_box{eps, 10.0 - eps};
        const std::pair<double, double> open_box{-10.0 + eps, 10.0 - eps};
        switch (id) {
            case SchemeId::P1: p.bounds = {w0_box}; break;
            case SchemeId::P2: p.bounds = {open_box, open_box, w0_box}; break;
            case SchemeId::P3:
                p.bounds = {open_box, open_box, open_box, open_box, open_box, w0_box};
                break;
        }
        return p;
    }
};

/// Objective for the resolution/stability optimization: returns -omega_f for
/// a feasible parameter set and the penalty 0 for every failure mode
/// (non-positive weights, unsolvable closure, singular A, unstable spectrum,
/// missing threshold crossing).
inline double objective(const OptimizationProblem& problem, std::span<const double> params) {
    const double w0 = params.back(); // w0 is last in the canonical ordering
    const WeightFamily w = derived_weights(w0);
    if (w.w1 <= 0.0 || w.w2 <= 0.0 || w.w3 <= 0.0) return 0.0;

    SchemeDefinition scheme;
    try {
        scheme = close_scheme(problem.scheme_id, params);
    } catch (const SingularClosure&) {
        return 0.0;
    }

    try {
        const StabilityReport st =
            stability_spectrum(scheme, problem.n_for_stability, problem.algorithm1_sign);
        if (st.max_real_part > 0.0) return 0.0;
    } catch (const SingularA&) {
        return 0.0;
    }

    const auto grid = make_omega_grid(0.01);
    double sum = 0.0;
    for (int node = 0; node < scheme.depth(); ++node) {
        const auto resp = sample_response(scheme, node, grid);
        const auto curves = resolution_errors(resp);
        const auto wr = first_crossing(grid, curves.eps_r, problem.sigmas[node]);
        const auto wi = first_crossing(grid, curves.eps_i, problem.sigmas[node]);
        if (!wr || !wi) return 0.0;
        sum += 0.5 * (*wr + *wi);
    }
    return -sum / double(scheme.depth());
}

struct DEConfig {
    int population_size = 0; // 0 means 15 x dimension
    double crossover_rate = 0.7;
    int max_generations = 500;
    double tolerance = 1e-10; // stop when the population's parameter spread falls below
    std::uint64_t rng_seed = 0;
    std::optional<std::vector<double>> initial_member; // replaces member 0 when set
};

struct OptimizeResult {
    std::vector<double> best_params;
    double best_objective = 0.0;
    SchemeDefinition scheme;
    int generations = 0;
};

/// One line of optimizer progress: generation index, best objective so far,
/// and the population's parameter spread.
using ProgressFn = std::function<void(int generation, double best, double spread)>;

namespace detail {

inline double unit_real(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

inline std::size_t pick_index(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

} // namespace detail

/// DE/rand/1/bin minimizer of the objective over the problem box. The
/// mutation factor is dithered per generation in [0.5, 1.0); selection is
/// synchronous, so a fixed seed reproduces the full trajectory.
inline OptimizeResult optimize(const OptimizationProblem& problem, const DEConfig& config,
                               const ProgressFn& progress = {}) {
    const int dim = free_param_count(problem.scheme_id);
    if (int(problem.bounds.size()) != dim)
        throw InvalidParamCount("bounds arity does not match the scheme");
    const int np = config.population_size > 0 ? config.population_size : 15 * dim;
    if (np < 4) throw std::invalid_argument("DE/rand/1 needs a population of at least 4");

    std::mt19937_64 rng(config.rng_seed);
    auto clip = [&](double x, int d) {
        return std::min(std::max(x, problem.bounds[d].first), problem.bounds[d].second);
    };

    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    for (auto& member : pop)
        for (int d = 0; d < dim; ++d) {
            const auto& [lo, hi] = problem.bounds[d];
            member[d] = lo + (hi - lo) * detail::unit_real(rng);
        }
    if (config.initial_member) {
        if (int(config.initial_member->size()) != dim)
            throw InvalidParamCount("initial member arity does not match the scheme");
        pop[0] = *config.initial_member;
        for (int d = 0; d < dim; ++d) pop[0][d] = clip(pop[0][d], d);
    }

    std::vector<double> score(np);
    for (int i = 0; i < np; ++i) score[i] = objective(problem, pop[i]);

    auto best_index = [&] {
        int b = 0;
        for (int i = 1; i < np; ++i)
            if (score[i] < score[b]) b = i;
        return b;
    };
    auto spread = [&] {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) {
            double lo = pop[0][d], hi = pop[0][d];
            for (int i = 1; i < np; ++i) {
                lo = std::min(lo, pop[i][d]);
                hi = std::max(hi, pop[i][d]);
            }
            s = std::max(s, hi - lo);
        }
        return s;
    };

    int generations = 0;
    for (int gen = 1; gen <= config.max_generations; ++gen) {
        const double f = 0.5 + 0.5 * detail::unit_real(rng); // per-generation dither
        std::vector<std::vector<double>> trial(np, std::vector<double>(dim));
        for (int i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do r1 = detail::pick_index(rng, np); while (int(r1) == i);
            do r2 = detail::pick_index(rng, np); while (int(r2) == i || r2 == r1);
            do r3 = detail::pick_index(rng, np); while (int(r3) == i || r3 == r1 || r3 == r2);
            const std::size_t jrand = detail::pick_index(rng, dim);
            for (int d = 0; d < dim; ++d) {
                const bool cross = detail::unit_real(rng) < config.crossover_rate ||
                                   std::size_t(d) == jrand;
                const double v = cross ? pop[r1][d] + f * (pop[r2][d] - pop[r3][d]) : pop[i][d];
                trial[i][d] = clip(v, d);
            }
        }
        for (int i = 0; i < np; ++i) {
            const double ts = objective(problem, trial[i]);
            if (ts <= score[i]) { // greedy selection
                pop[i] = std::move(trial[i]);
                score[i] = ts;
            }
        }
        generations = gen;
        const double sp = spread();
        if (progress) progress(gen, score[best_index()], sp);
        if (sp < config.tolerance) break;
    }

    const int b = best_index();
    if (score[b] >= 0.0)
        throw NoFeasiblePoint("every evaluated member hit the penalty after " +
                              std::to_string(generations) + " generations");
    OptimizeResult res;
    res.best_params = pop[b];
    res.best_objective = score[b];
    res.scheme = close_scheme(problem.scheme_id, res.best_params);
    res.generations = generations;
    return res;
}

} // namespace ccfd
