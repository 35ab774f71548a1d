// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
// A criterion also fails when it overruns its runtime limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rotirs/experiment.hpp"
#include "rotirs/rotation.hpp"

using namespace rotirs;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::string config_path(const char* name) { return std::string(ROTIRS_CONFIG_DIR) + "/" + name; }

ExperimentSpec desk_spec(const char* file) {
    ExperimentSpec s = load_config(config_path(file));
    apply_preset(s, "desk");
    return s;
}

ScenarioGeometry geometry(const ExperimentSpec& s, bool projected) {
    ExperimentSpec p = s;
    if (projected) {
        for (Vec3* v : {&p.bs_position, &p.irs1_position, &p.irs2_position, &p.user_position}) v->z() = 0.0;
    }
    return build_geometry(p, p.irs1_elements, p.irs2_elements, p.bs_antennas);
}

const ResultRow& row(const std::vector<ResultRow>& rows, const std::string& scheme, double value) {
    for (const auto& r : rows)
        if (r.scheme == scheme && r.sweep_value == value) return r;
    throw std::runtime_error("missing row " + scheme);
}

std::string csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    emit_csv(rows, os);
    return os.str();
}

CMatrix random_cmatrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = n(rng);
            m(i, j) = cplx(re, n(rng));
        }
    return m;
}

ChannelSet random_channels(std::mt19937_64& rng, int m, int n1, int n2) {
    return {random_cmatrix(rng, n1, m), random_cmatrix(rng, n2, n1), random_cmatrix(rng, n2, 1).col(0)};
}

RVector random_phases(std::mt19937_64& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    RVector p(n);
    for (auto& x : p) x = u(rng);
    return p;
}

// Best |sum_n t_n e^{j psi_n}|^2 over a one-degree grid, three terms.
double grid_best_three(const CVector& t) {
    std::vector<cplx> rot(360);
    for (int k = 0; k < 360; ++k) rot[size_t(k)] = std::polar(1.0, k * kPi / 180.0);
    double best = 0.0;
    for (int a = 0; a < 360; ++a) {
        const cplx x = t(0) * rot[size_t(a)];
        for (int b = 0; b < 360; ++b) {
            const cplx y = x + t(1) * rot[size_t(b)];
            for (int c = 0; c < 360; ++c) best = std::max(best, std::norm(y + t(2) * rot[size_t(c)]));
        }
    }
    return best;
}

Verdict quartic_scaling() {
    ExperimentSpec s = desk_spec("default.json");
    s.trials = 1;
    s.kappa = kPureLos;
    s.values = {64, 128};
    s.schemes = {Scheme{SchemeKind::DoubleRotatable}, Scheme{SchemeKind::SingleRotatable}};
    const auto rows = run_experiment(s);
    const double dr = row(rows, "double_rotatable", 128).snr_db_mean - row(rows, "double_rotatable", 64).snr_db_mean;
    const double sr = row(rows, "single_rotatable", 128).snr_db_mean - row(rows, "single_rotatable", 64).snr_db_mean;
    const bool ok = std::abs(dr - 12.04) <= 0.01 && std::abs(sr - 6.02) <= 0.01;
    return {ok, fmt("double delta %.4f dB (want 12.04), single delta %.4f dB (want 6.02), tol 0.01", dr, sr)};
}

Verdict closed_form_cross_validation() {
    const ScenarioGeometry g = geometry(desk_spec("default.json"), true);
    const double theta = closed_form_azimuth_irs1(g);
    const int points = 721;
    const double step = kPi / (points - 1);
    int arg = 0;
    double best = -1e300;
    for (int i = 0; i < points; ++i) {
        const double f = penalized_fitness_los_irs1(g, {-kHalfPi + i * step, 0.0}, 1e3);
        if (f > best) best = f, arg = i;
    }
    const double gap = std::abs(theta - (-kHalfPi + arg * step));
    const double gain = irs1_view(g, {theta, 0.0}).gain();
    double worst = 1e300;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        PsoConfig cfg;
        cfg.swarm_size = 60;
        cfg.max_iters = 40;
        cfg.seed = seed;
        const PsoResult r = pso_optimize(
            [&](std::span<const double> x) { return penalized_fitness_los_irs1(g, {x[0], x[1]}, cfg.penalty); }, 2,
            cfg);
        worst = std::min(worst, r.best_fitness / gain);
    }
    return {gap <= step + 1e-15 && worst >= 0.999,
            fmt("|closed form - grid argmax| = %.3g rad (step %.3g), worst PSO/closed-form = %.6f over 10 seeds", gap,
                step, worst)};
}

Verdict elevation_sufficiency() {
    const ScenarioGeometry g = geometry(desk_spec("default.json"), true);
    const double theta = closed_form_azimuth_irs1(g);
    const double at_zero = irs1_view(g, {theta, 0.0}).gain();
    double excess = -1e300;
    for (int i = 0; i < 1001; ++i) {
        const double phi = -kHalfPi + i * kPi / 1000;
        excess = std::max(excess, irs1_view(g, {theta, phi}).gain() - at_zero);
    }
    return {excess <= 1e-12, fmt("max F(theta*, phi) - F(theta*, 0) = %.3g over 1001 elevations", excess)};
}

Verdict subproblem_oracles() {
    std::mt19937_64 rng(2024);
    const LinkBudget budget;
    int mrt_losses = 0;
    for (int inst = 0; inst < 20; ++inst) {
        const ChannelSet ch = random_channels(rng, 4, 6, 5);
        const RVector p1 = random_phases(rng, 6), p2 = random_phases(rng, 5);
        const CVector w = mrt_weights(ch, p1, p2, budget);
        const double best = std::norm(cascaded_response(ch, {w, p1, p2}));
        for (int k = 0; k < 1000; ++k) {
            const CVector r = random_cmatrix(rng, 4, 1).col(0);
            const CVector wr = std::sqrt(budget.pt) * r / r.norm();
            if (std::norm(cascaded_response(ch, {wr, p1, p2})) > best * (1 + 1e-12)) ++mrt_losses;
        }
    }
    double worst_shortfall = 0.0, worst_excess = 0.0;
    for (int inst = 0; inst < 3; ++inst) {
        const ChannelSet ch = random_channels(rng, 2, 3, 3);
        const CVector w = random_cmatrix(rng, 2, 1).col(0);

        const RVector p2 = random_phases(rng, 3);
        const RVector p1 = irs1_phases(ch, p2, w);
        const CVector ht =
            ch.s.adjoint() * (p2.unaryExpr([](double x) { return std::polar(1.0, -x); }).cwiseProduct(ch.f));
        const double opt1 = std::norm(cascaded_response(ch, {w, p1, p2}));
        const double grid1 = grid_best_three(ht.conjugate().cwiseProduct(ch.g * w));

        const RVector q1 = random_phases(rng, 3);
        const RVector q2 = irs2_phases(ch, q1, w);
        const CVector hb = ch.s * (q1.unaryExpr([](double x) { return std::polar(1.0, x); }).cwiseProduct(ch.g * w));
        const double opt2 = std::norm(cascaded_response(ch, {w, q1, q2}));
        const double grid2 = grid_best_three(ch.f.conjugate().cwiseProduct(hb));

        worst_excess = std::max({worst_excess, grid1 / opt1 - 1, grid2 / opt2 - 1});
        worst_shortfall = std::max({worst_shortfall, 1 - grid1 / opt1, 1 - grid2 / opt2});
    }
    const bool ok = mrt_losses == 0 && worst_excess <= 1e-12 && worst_shortfall <= 2e-4;
    return {ok, fmt("random w beating MRT: %.0f of 20000; grid over co-phasing %.3g, co-phasing over grid %.3g",
                    mrt_losses, worst_excess, worst_shortfall)};
}

Verdict ao_monotonicity() {
    const ExperimentSpec s = desk_spec("default.json");
    ExperimentSpec small = s;
    small.bs_antennas = 4;
    small.irs1_elements = small.irs2_elements = 16;
    const ScenarioGeometry g = geometry(small, false);
    const RicianParams params = RicianParams::uniform(1.0, s.beta);
    const LinkBudget budget{s.pt, s.noise_power};
    const AoOptions ao;
    double worst_drop = 0.0;
    int most_iters = 0, capped = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        PsoConfig pso = s.pso;
        pso.seed = seed;
        const AoPsoState st = solve_ao_pso(g, params, budget, pso, ao, seed);
        for (size_t t = 1; t < st.objective_trace.size(); ++t) {
            const double prev = st.objective_trace[t - 1];
            worst_drop = std::max(worst_drop, (prev - st.objective_trace[t]) / prev);
        }
        most_iters = std::max(most_iters, st.iteration);
        if (st.iteration == ao.max_outer_iters) ++capped;
    }
    return {worst_drop <= 1e-9 && most_iters <= 30,
            fmt("worst relative drop %.3g, most outer iterations %.0f (limit 30), %.0f of 20 stopped by the cap",
                worst_drop, most_iters, capped)};
}

Verdict los_limit() {
    const ExperimentSpec s = desk_spec("default.json");
    const Scenario sc = make_scenario(geometry(s, false), s.single_irs_position);
    const LinkBudget budget{s.pt, s.noise_power};
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PsoConfig pso = s.pso;
        pso.seed = seed;
        const Scheme dr{SchemeKind::DoubleRotatable};
        const SchemeResult los = solve_los(sc, RicianParams::uniform(kPureLos, s.beta), budget, dr, pso);
        const SchemeResult ric = solve_rician(sc, RicianParams::uniform(1e6, s.beta), budget, dr, pso, s.ao, seed);
        worst = std::max(worst, std::abs(ric.snr / los.snr - 1));
    }
    return {worst <= 5e-3, fmt("worst |AO-PSO / LoS closed form - 1| = %.4f%% over 5 seeds (limit 0.5%%)", worst * 100)};
}

Verdict rician_trend() {
    ExperimentSpec s = desk_spec("rician_factor.json");
    s.trials = 200;
    s.values = {1, 10};
    s.schemes = {Scheme{SchemeKind::DoubleRotatable}, Scheme{SchemeKind::DoubleFixed}};
    const auto rows = run_experiment(s);
    const ResultRow& weak = row(rows, "double_rotatable", 1);
    const ResultRow& strong = row(rows, "double_rotatable", 10);
    const ResultRow& fixed = row(rows, "double_fixed", 10);
    const double n = s.trials;
    const double se = std::sqrt((weak.snr_db_std * weak.snr_db_std + strong.snr_db_std * strong.snr_db_std) / n);
    const double rise = strong.snr_db_mean - weak.snr_db_mean;
    const bool ok = rise > 2 * se && weak.snr_db_mean > fixed.snr_db_mean;
    return {ok, fmt("rotatable 10 dB - 1 dB = %.3f dB (2 SE = %.3f); rotatable at 1 dB - fixed at 10 dB = %.3f dB",
                    rise, 2 * se, weak.snr_db_mean - fixed.snr_db_mean)};
}

Verdict crossover() {
    ExperimentSpec s = desk_spec("default.json");
    s.trials = 1;
    s.schemes = {Scheme{SchemeKind::DoubleRotatable}, Scheme{SchemeKind::SingleRotatable}};
    const auto rows = run_experiment(s);
    bool seen_negative = false, flipped = false;
    double first_positive = 0.0;
    for (double v : s.values) {
        const double diff = row(rows, "double_rotatable", v).snr_db_mean - row(rows, "single_rotatable", v).snr_db_mean;
        if (diff < 0) seen_negative = true;
        if (diff > 0 && seen_negative && !flipped) flipped = true, first_positive = v;
    }
    return {flipped, flipped ? fmt("double - single turns positive at N = %.0f", first_positive)
                             : std::string("no negative-to-positive sign change")};
}

Verdict determinism() {
    ExperimentSpec los = desk_spec("default.json");
    los.trials = 1;
    los.values = {64, 1024, 16384};
    ExperimentSpec ric = desk_spec("rician_factor.json");
    ric.trials = 1;
    const bool a = csv(run_experiment(los)) == csv(run_experiment(los));
    const bool b = csv(run_experiment(ric)) == csv(run_experiment(ric));
    return {a && b, std::string("LoS sweep ") + (a ? "identical" : "differs") + ", Rician sweep " +
                        (b ? "identical" : "differs")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_s;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {"quartic/quadratic element scaling", 10, quartic_scaling},
        {"closed-form azimuth vs grid and swarm", 30, closed_form_cross_validation},
        {"elevation sufficiency", 1, elevation_sufficiency},
        {"sub-problem optimality oracles", 60, subproblem_oracles},
        {"AO-PSO monotonicity and termination", 120, ao_monotonicity},
        {"LoS-limit consistency", 120, los_limit},
        {"Rician factor trend", 300, rician_trend},
        {"double/single crossover", 30, crossover},
        {"determinism", 10, determinism},
    };
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= criteria[i].limit_s;
        const bool pass = v.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("criterion %zu %s: %s  %s  [%.2fs, limit %.0fs%s]\n", i + 1, criteria[i].name,
                    pass ? "PASS" : "FAIL", v.detail.c_str(), secs, criteria[i].limit_s, in_time ? "" : ", overran");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
