#include "rotirs/experiment.hpp"

#include <cmath>
#include <limits>

#include "rotirs/parallel.hpp"
#include "rotirs/rng.hpp"

namespace rotirs {

namespace {

constexpr std::uint64_t kTagSchemeSwarm = 100;

struct TrialOutcome {
    double snr_db = 0.0;
    double gain1 = 0.0, gain2 = 0.0;
    Orientation o1, o2;
    double dist_product = 0.0;
};

struct PointSetup {
    Scenario scenario;
    RicianParams params;
    LinkBudget budget;
};

PointSetup setup_point(const ExperimentSpec& spec, double value, bool needs_double) {
    int n1 = spec.irs1_elements, n2 = spec.irs2_elements;
    RicianParams params = RicianParams::uniform(spec.kappa, spec.beta);
    LinkBudget budget{spec.pt, spec.noise_power};
    if (spec.axis == SweepAxis::ElementCount) {
        const auto n = static_cast<long long>(value);
        if (needs_double && n % 2 != 0) {
            throw ConfigError("config key 'sweep.values': element count " + std::to_string(n) +
                              " is odd but a double-IRS scheme splits it evenly");
        }
        n1 = static_cast<int>(std::max<long long>(n / 2, 1));
        n2 = n1;
    } else if (spec.axis == SweepAxis::TxPowerDbm) {
        budget.pt = dbm_to_watts(value);
    } else {
        params = RicianParams::uniform(db_to_linear(value), spec.beta);
    }
    const ScenarioGeometry dual = build_geometry(spec, n1, n2, spec.bs_antennas);
    Scenario scenario = make_scenario(dual, spec.single_irs_position);
    if (spec.axis == SweepAxis::ElementCount) {
        // The single surface carries the whole count, also when it is odd.
        const auto n = static_cast<int>(value);
        scenario.single = SingleIrsGeometry(dual.bs_origin(), spec.single_irs_position, dual.user_pos(),
                                            dual.bs_layout(),
                                            near_square_layout(n, spec.element_spacing_wavelengths * spec.wavelength()),
                                            dual.wavelength());
    }
    return {std::move(scenario), params, budget};
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    bool needs_double = false;
    for (const Scheme& s : spec.schemes) needs_double = needs_double || s.is_double();

    std::vector<PointSetup> points;
    for (double v : spec.values) points.push_back(setup_point(spec, v, needs_double));

    const size_t n_schemes = spec.schemes.size();
    const size_t n_trials = static_cast<size_t>(spec.trials);
    const size_t total = points.size() * n_schemes * n_trials;
    std::vector<TrialOutcome> outcomes(total);

    parallel_for(total, spec.threads, [&](size_t task) {
        const size_t trial = task % n_trials;
        const size_t scheme_index = (task / n_trials) % n_schemes;
        const size_t point = task / (n_trials * n_schemes);
        const PointSetup& p = points[point];
        const Scheme& scheme = spec.schemes[scheme_index];

        const std::uint64_t channel_seed = derive_seed(spec.seed, trial);
        PsoConfig pso = spec.pso;
        pso.seed = derive_seed(channel_seed, kTagSchemeSwarm + static_cast<std::uint64_t>(scheme.kind));

        const SchemeResult r = p.params.pure_los()
                                   ? solve_los(p.scenario, p.params, p.budget, scheme, pso)
                                   : solve_rician(p.scenario, p.params, p.budget, scheme, pso, spec.ao, channel_seed);
        if (!(r.snr > 0.0) || !std::isfinite(r.snr)) {
            throw NumericalError(scheme_name(scheme.kind) + ": SNR is not positive and finite" +
                                 (r.infeasible ? " (orientation puts an endpoint behind a surface)" : ""));
        }
        outcomes[task] = TrialOutcome{linear_to_db(r.snr), r.gain1, r.gain2, r.orient1, r.orient2, r.dist_product};
    });

    std::vector<ResultRow> rows;
    for (size_t point = 0; point < points.size(); ++point) {
        for (size_t si = 0; si < n_schemes; ++si) {
            const Scheme& scheme = spec.schemes[si];
            std::vector<double> db, g1, g2, t1, p1, t2, p2;
            for (size_t t = 0; t < n_trials; ++t) {
                const TrialOutcome& o = outcomes[(point * n_schemes + si) * n_trials + t];
                db.push_back(o.snr_db);
                g1.push_back(o.gain1);
                g2.push_back(o.gain2);
                t1.push_back(o.o1.theta);
                p1.push_back(o.o1.phi);
                t2.push_back(o.o2.theta);
                p2.push_back(o.o2.phi);
            }
            const double nan = std::numeric_limits<double>::quiet_NaN();
            ResultRow row;
            row.scheme = scheme_name(scheme.kind);
            row.sweep_axis = sweep_axis_name(spec.axis);
            row.sweep_value = spec.values[point];
            row.snr_db_mean = mean(db);
            row.snr_db_std = sample_std(db);
            row.trials = spec.trials;
            row.seed = spec.seed;
            row.gain1 = mean(g1);
            row.theta1 = mean(t1);
            row.phi1 = mean(p1);
            row.gain2 = scheme.is_double() ? mean(g2) : nan;
            row.theta2 = scheme.is_double() ? mean(t2) : nan;
            row.phi2 = scheme.is_double() ? mean(p2) : nan;
            row.dist_product = outcomes[(point * n_schemes + si) * n_trials].dist_product;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace rotirs
