// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ccfd/ccfd.hpp"

using namespace ccfd;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int idx, const char* name, bool pass, const std::string& detail, double secs) {
    std::printf("[%2d] %-48s %s  (%s)  [%.1f s]\n", idx, name, pass ? "PASS" : "FAIL",
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

const SchemeId kIds[3] = {SchemeId::P1, SchemeId::P2, SchemeId::P3};

double roundtrip_error(SchemeId id) {
    const SchemeDefinition closed = close_scheme(id, bundled_free_params(id));
    const SchemeDefinition table = bundled_scheme(id);
    double worst = 0.0;
    auto upd = [&](double got, double want) {
        worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
    };
    for (int i = 0; i < table.depth(); ++i)
        for (int j = 0; j < 4; ++j) {
            upd(closed.boundary.a[i][j], table.boundary.a[i][j]);
            upd(closed.boundary.b[i][j], table.boundary.b[i][j]);
        }
    upd(closed.weights.w1, table.weights.w1);
    upd(closed.weights.w2, table.weights.w2);
    upd(closed.weights.w3, table.weights.w3);
    for (int i = 0; i < table.depth(); ++i) upd(closed.aux_weights[i], table.aux_weights[i]);
    return worst;
}

void criterion_1() {
    Timer t;
    double worst = 0.0;
    for (SchemeId id : kIds) worst = std::max(worst, roundtrip_error(id));
    report(1, "table round-trip (rel 1e-9)", worst <= 1e-9, fmt("max rel err %.2e", worst),
           t.seconds());
}

void criterion_2() {
    Timer t;
    double worst_identity = 0.0, worst_random = 0.0;
    std::mt19937_64 rng(1234);
    for (SchemeId id : kIds) {
        const SchemeMatrices m = assemble_matrices(bundled_scheme(id), Grid::uniform(100, 1.0));
        const ConservationIdentityReport rep = verify_conservation_identities(m);
        worst_identity = std::max({worst_identity, rep.weight_residual, rep.flux_residual});
        for (int trial = 0; trial < 1000; ++trial) {
            Eigen::VectorXd f(101);
            for (int i = 0; i <= 100; ++i) f(i) = 4.0 * double(rng() >> 11) * 0x1.0p-53 - 2.0;
            const double lhs = m.wprime_vector.dot(m.b_matrix * f);
            const double res = std::abs(lhs - (f(100) - f(0))) / f.cwiseAbs().maxCoeff();
            worst_random = std::max(worst_random, res);
        }
    }
    const bool pass = worst_identity <= 1e-9 && worst_random <= 1e-10;
    report(2, "conservation identities at N=100 + 1000 random F", pass,
           fmt("identity %.2e, random %.2e", worst_identity, worst_random), t.seconds());
}

void criterion_3() {
    Timer t;
    bool pass = true;
    std::string detail = "degrees:";
    for (SchemeId id : kIds) {
        const int d20 = quadrature_precision(bundled_scheme(id), 20);
        const int d31 = quadrature_precision(bundled_scheme(id), 31);
        pass = pass && d20 >= 3 && d31 >= 3;
        detail += fmt(" %s=%d/%d", to_string(id), d20, d31);
    }
    const WeightFamily gregory = derived_weights(3.0 / 8.0);
    const int g20 = quadrature_precision(gregory, 20), g31 = quadrature_precision(gregory, 31);
    pass = pass && g20 >= 3 && g31 >= 3;
    detail += fmt(" gregory=%d/%d (measured maximal exact degree)", g20, g31);
    report(3, "quadrature exact on degree <= 3 at n=20,31", pass, detail, t.seconds());
}

void criterion_4() {
    Timer t;
    bool pass = true;
    double worst = -1e300;
    for (SchemeId id : kIds)
        for (int n : {50, 100, 200}) {
            const StabilityReport rep = stability_spectrum(bundled_scheme(id), n);
            pass = pass && rep.max_real_part < 0.0;
            worst = std::max(worst, rep.max_real_part);
        }
    report(4, "spectra strictly stable at n=50,100,200", pass, fmt("max Re %.2e", worst),
           t.seconds());
}

void criterion_5() {
    Timer t;
    const double target[3] = {0.9268, 0.9425, 0.9737};
    bool pass = true;
    std::string detail;
    for (int k = 0; k < 3; ++k) {
        const ResolutionReport rep = average_resolution(bundled_scheme(kIds[k]));
        const double got = rep.omega_f.value_or(-1.0);
        const bool ok = rep.omega_f && std::abs(got - target[k]) <= 0.02;
        pass = pass && ok;
        detail += fmt("%s%s=%.4f vs %.4f%s", k ? ", " : "", to_string(kIds[k]), got, target[k],
                      ok ? "" : "(!)");
    }
    report(5, "omega_f within 0.02 of the cited values", pass, detail, t.seconds());
}

void criterion_6() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (SchemeId id : kIds) {
        std::vector<std::pair<double, double>> h_err;
        for (int n : {65, 129, 257, 513}) {
            const AdvectionRun run = advect_1d(bundled_scheme(id), n, 10.0, 0.5);
            h_err.emplace_back(run.h, run.max_error);
        }
        const double slope = error_and_order(h_err).least_squares;
        const bool ok = slope >= 3.7 && slope <= 4.3;
        pass = pass && ok;
        detail += fmt("%s%s=%.2f%s", detail.empty() ? "" : ", ", to_string(id), slope,
                      ok ? "" : "(!)");
    }
    report(6, "1D convergence order in [3.7, 4.3], t=10", pass, detail, t.seconds());
}

void criterion_7() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (SchemeId id : kIds) {
        std::vector<std::pair<double, double>> h_err;
        for (int n : {21, 41, 61, 81}) {
            const Advection2DRun run = advect_2d_varcoeff(bundled_scheme(id), n, 0.001, 1.0);
            h_err.emplace_back(run.h, run.max_error);
        }
        const double slope = error_and_order(h_err).least_squares;
        const bool ok = slope >= 3.5 && slope <= 4.5;
        pass = pass && ok;
        detail += fmt("%s%s=%.2f%s", detail.empty() ? "" : ", ", to_string(id), slope,
                      ok ? "" : "(!)");
    }
    report(7, "2D convergence order in [3.5, 4.5], t=1", pass, detail, t.seconds());
}

void criterion_8() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (SchemeId id : kIds) {
        std::vector<std::pair<double, double>> h_err;
        bool completed = true;
        bool decreasing = true;
        try {
            double prev = 1e300;
            for (int n : {30, 60, 90}) {
                VortexConfig cfg;
                cfg.epsilon = 0.1;
                cfg.nx = cfg.ny = n;
                cfg.t_over_char = 2.0;
                const VortexRun run = euler_vortex_2d(bundled_scheme(id), cfg);
                h_err.emplace_back(1.5 / (n - 1), run.max_pressure_error);
                decreasing = decreasing && run.max_pressure_error < prev;
                prev = run.max_pressure_error;
            }
        } catch (const Error&) {
            completed = false;
        }
        double slope = 0.0;
        bool ok = false;
        if (completed) {
            slope = error_and_order(h_err).least_squares;
            ok = decreasing && slope >= 3.0 && slope <= 4.5;
        }
        pass = pass && ok;
        detail += fmt("%s%s=%.2f%s", detail.empty() ? "" : ", ", to_string(id), slope,
                      ok ? "" : "(!)");
    }
    report(8, "vortex positive-p, error order in [3.0, 4.5]", pass, detail, t.seconds());
}

void criterion_9() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (SchemeId id : kIds) {
        const AdvectionRun run = advect_1d(bundled_scheme(id), 129, 1000.0, 0.5);
        double err_at_10 = 0.0, max_all = run.max_error;
        for (const auto& [tt, e] : run.error_history) {
            if (tt <= 10.0 + 1e-9) err_at_10 = std::max(err_at_10, e);
            else break;
        }
        const double ratio = max_all / err_at_10;
        const bool ok = ratio <= 10.0;
        pass = pass && ok;
        detail += fmt("%s%s ratio=%.2f%s", detail.empty() ? "" : ", ", to_string(id), ratio,
                      ok ? "" : "(!)");
    }
    report(9, "long-time boundedness to t=1000 at n=129", pass, detail, t.seconds());
}

void criterion_10() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (SchemeId id : kIds) {
        const double v = objective(OptimizationProblem::standard(id), bundled_free_params(id));
        const bool ok = v >= -0.995 && v <= -0.90;
        pass = pass && ok;
        detail += fmt("%s%s=%.4f%s", detail.empty() ? "" : ", ", to_string(id), v, ok ? "" : "(!)");
    }
    DEConfig config;
    config.rng_seed = 7;
    config.max_generations = 200;
    double de_best = 0.0;
    try {
        const OptimizeResult res = optimize(OptimizationProblem::standard(SchemeId::P1), config);
        de_best = res.best_objective;
    } catch (const NoFeasiblePoint&) {
        de_best = 0.0;
    }
    const bool de_ok = de_best <= -0.90;
    pass = pass && de_ok;
    detail += fmt(", DE(P1,seed7)=%.4f%s", de_best, de_ok ? "" : "(!)");
    report(10, "objective window + seeded DE on P1", pass, detail, t.seconds());
}

} // namespace

int main() {
    std::printf("acceptance suite: conservative compact schemes\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures == 0) {
        std::printf("SUMMARY: all 10 criteria passed\n");
        return 0;
    }
    std::printf("SUMMARY: %d of 10 criteria failed\n", failures);
    return 1;
}
