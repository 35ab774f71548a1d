#include "rotirs/solver.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "rotirs/rng.hpp"
#include "rotirs/rotation.hpp"

namespace rotirs {

namespace {

constexpr std::uint64_t kTagDesign1 = 1;
constexpr std::uint64_t kTagDesign2 = 2;
constexpr std::uint64_t kTagDesignSingle = 3;
constexpr std::uint64_t kTagOuter = 0xA0;
constexpr std::uint64_t kTagRedraw = 0xD0;

bool in_plane(const Vec3& p) { return std::abs(p.z()) <= 1e-12; }

std::vector<double> as_point(const Orientation& o) { return {o.theta, o.phi}; }
Orientation as_orientation(std::span<const double> x, size_t at = 0) { return {x[at], x[at + 1]}; }

/// Gain actually credited to a surface: the geometric value when it lies in
/// [0, 1], otherwise 0 (an endpoint sits behind the surface).
double credited_gain(const ReflectionView& v) {
    const double gain = v.gain();
    return (gain >= 0.0 && gain <= 1.0) ? gain : 0.0;
}

SingleOrientationDesign design_surface(const std::function<double(const Orientation&)>& fitness,
                                       const PsoConfig& pso, std::uint64_t seed,
                                       std::vector<std::vector<double>> candidates) {
    PsoConfig cfg = pso;
    cfg.seed = seed;
    const PsoResult r = pso_optimize([&](std::span<const double> x) { return fitness(as_orientation(x)); }, 2,
                                     cfg, candidates);
    return {as_orientation(r.best_position), r.best_fitness};
}

BeamformingSolution single_los_solution(const SingleIrsGeometry& g, const Orientation& o, double beta,
                                        const LinkBudget& budget) {
    const auto bs = bs_antenna_positions(g.bs_origin(), g.bs_layout());
    const auto e = irs_element_positions(g.irs_origin(), g.irs_layout(), o, Surface::Irs1);
    const double t = (g.irs_origin() - g.bs_origin()).norm();
    const double r = (g.user_pos() - g.irs_origin()).norm();
    const std::vector<Vec3> first_bs{bs.front()}, first_el{e.front()}, user{g.user_pos()};
    // G = g2 g1^T with g2[0] = 1: row 0 carries g1, column 0 carries g2 up to g1[0].
    const CVector g1 = planar_los_matrix(bs, first_el, beta, g.wavelength(), t).row(0).transpose();
    const CVector g2 = planar_los_matrix(first_bs, e, beta, g.wavelength(), t).col(0);
    const CVector f = planar_los_matrix(user, e, beta, g.wavelength(), r).col(0);
    BeamformingSolution sol;
    const double norm = g1.norm();
    if (!(norm > 0.0)) throw DegenerateChannelError("single-IRS signature is zero");
    sol.w = (std::sqrt(budget.pt) / norm) * g1.conjugate();
    sol.psi1 = cophase(f, g2, "single_los_solution");
    return sol;
}

bool improved_enough(double start, double end, double eps) {
    if (std::isinf(eps)) return false;
    return end - start >= eps * std::abs(start);
}

}  // namespace

std::string scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::DoubleRotatable: return "double_rotatable";
        case SchemeKind::SingleRotatable: return "single_rotatable";
        case SchemeKind::DoubleFixed: return "double_fixed";
        case SchemeKind::SingleFixed: return "single_fixed";
    }
    return "unknown";
}

std::optional<SchemeKind> parse_scheme_name(const std::string& name) {
    for (SchemeKind k : {SchemeKind::DoubleRotatable, SchemeKind::SingleRotatable, SchemeKind::DoubleFixed,
                         SchemeKind::SingleFixed}) {
        if (scheme_name(k) == name) return k;
    }
    return std::nullopt;
}

Scenario make_scenario(const ScenarioGeometry& dual, const Vec3& single_irs_origin) {
    const ArrayLayout layout =
        near_square_layout(dual.irs1_elements() + dual.irs2_elements(), dual.irs1_layout().spacing);
    return Scenario{dual, SingleIrsGeometry(dual.bs_origin(), single_irs_origin, dual.user_pos(), dual.bs_layout(),
                                            layout, dual.wavelength())};
}

double distance_product(const ScenarioGeometry& g) {
    const FarFieldDistances d = far_field_distances(g);
    return d.t11 * d.d11 * d.r1;
}

double distance_product(const SingleIrsGeometry& g) {
    return (g.irs_origin() - g.bs_origin()).norm() * (g.user_pos() - g.irs_origin()).norm();
}

OrientationDesign los_orientation_design(const ScenarioGeometry& g, const PsoConfig& pso,
                                         const Orientation& reference) {
    const double tau = pso.penalty;
    std::vector<std::vector<double>> seeds1{as_point(reference)}, seeds2{as_point(reference)};
    if (in_plane(g.bs_origin()) && in_plane(g.irs1_origin()) && in_plane(g.irs2_origin()) &&
        in_plane(g.user_pos())) {
        try {
            seeds1.push_back({closed_form_azimuth_irs1(g), 0.0});
            seeds2.push_back({closed_form_azimuth_irs2(g), 0.0});
        } catch (const DegenerateGeometryError&) {
            // No reachable bisector; the swarms search unaided.
        }
    }
    const auto d1 = design_surface([&](const Orientation& o) { return penalized_fitness_los_irs1(g, o, tau); }, pso,
                                   derive_seed(pso.seed, kTagDesign1), seeds1);
    const auto d2 = design_surface([&](const Orientation& o) { return penalized_fitness_los_irs2(g, o, tau); }, pso,
                                   derive_seed(pso.seed, kTagDesign2), seeds2);
    return {d1.orient, d2.orient, d1.fitness, d2.fitness};
}

SingleOrientationDesign los_orientation_design(const SingleIrsGeometry& g, const PsoConfig& pso,
                                               const Orientation& reference) {
    const double tau = pso.penalty;
    std::vector<std::vector<double>> seeds{as_point(reference)};
    if (in_plane(g.bs_origin()) && in_plane(g.irs_origin()) && in_plane(g.user_pos())) {
        try {
            seeds.push_back({closed_form_azimuth_single(g), 0.0});
        } catch (const DegenerateGeometryError&) {
        }
    }
    return design_surface([&](const Orientation& o) { return penalized_fitness_los_single(g, o, tau); }, pso,
                          derive_seed(pso.seed, kTagDesignSingle), seeds);
}

double upper_bound_snr(const ScenarioGeometry& g, const RicianParams& params, const LinkBudget& budget) {
    return snr_los_closed_form(g, 1.0, 1.0, params, budget);
}

SchemeResult solve_los(const Scenario& scenario, const RicianParams& params, const LinkBudget& budget,
                       const Scheme& scheme, const PsoConfig& pso) {
    budget.validate();
    SchemeResult out;
    out.scheme = scheme;
    if (scheme.is_double()) {
        const ScenarioGeometry& g = scenario.dual;
        if (scheme.is_rotatable()) {
            const OrientationDesign d = los_orientation_design(g, pso, scheme.fixed);
            out.orient1 = d.orient1;
            out.orient2 = d.orient2;
        } else {
            check_feasible(scheme.fixed);
            out.orient1 = out.orient2 = scheme.fixed;
        }
        const ReflectionView v1 = irs1_view(g, out.orient1);
        const ReflectionView v2 = irs2_view(g, out.orient2);
        out.infeasible = !(v1.feasible() && v2.feasible());
        out.gain1 = credited_gain(v1);
        out.gain2 = credited_gain(v2);
        const LosSignature sig = los_signature_decomposition(g, out.orient1, out.orient2, params.beta);
        out.sol = los_closed_form(sig, planar_user_channel(g, out.orient2, params.beta), budget);
        out.snr = snr_los_closed_form(g, out.gain1, out.gain2, params, budget);
        out.dist_product = distance_product(g);
    } else {
        const SingleIrsGeometry& g = scenario.single;
        if (scheme.is_rotatable()) {
            out.orient1 = los_orientation_design(g, pso, scheme.fixed).orient;
        } else {
            check_feasible(scheme.fixed);
            out.orient1 = scheme.fixed;
        }
        const ReflectionView v = single_irs_view(g, out.orient1);
        out.infeasible = !v.feasible();
        out.gain1 = credited_gain(v);
        out.gain2 = std::numeric_limits<double>::quiet_NaN();
        out.sol = single_los_solution(g, out.orient1, params.beta, budget);
        out.snr = snr_los_single_irs(g, out.gain1, budget, g.irs_layout().size(), g.bs_layout().size(), params.beta);
        out.dist_product = distance_product(g);
    }
    out.objective_trace = {out.snr};
    return out;
}

namespace {

/// Beamformer steps and trace bookkeeping shared by the double-IRS solves.
class DualAo {
public:
    DualAo(const ScenarioGeometry& g, const RicianParams& params, const LinkBudget& budget, const AoOptions& ao,
           std::uint64_t channel_seed)
        : g_(g), params_(params), budget_(budget), ao_(ao), seed_(channel_seed),
          synth_(g, params, channel_seed, ao.channel) {}

    double objective(const Orientation& o1, const Orientation& o2, const ChannelSet& ch,
                     const BeamformingSolution& sol) const {
        return snr(ch, sol, credited_gain(irs1_view(g_, o1)), credited_gain(irs2_view(g_, o2)), budget_);
    }

    void start(AoPsoState& st) {
        ch_ = synth_(st.orient1, st.orient2);
        const RVector zero1 = RVector::Zero(g_.irs1_elements());
        const RVector zero2 = RVector::Zero(g_.irs2_elements());
        st.sol.w = mrt_weights(ch_, zero1, zero2, budget_);
        st.sol.psi1 = irs1_phases(ch_, zero2, st.sol.w);
        st.sol.psi2 = irs2_phases(ch_, st.sol.psi1, st.sol.w);
        st.objective_trace = {objective(st.orient1, st.orient2, ch_, st.sol)};
    }

    void beamformer_steps(AoPsoState& st) {
        st.sol.w = mrt_weights(ch_, st.sol.psi1, st.sol.psi2, budget_);
        st.objective_trace.push_back(objective(st.orient1, st.orient2, ch_, st.sol));
        st.sol.psi1 = irs1_phases(ch_, st.sol.psi2, st.sol.w);
        st.objective_trace.push_back(objective(st.orient1, st.orient2, ch_, st.sol));
        st.sol.psi2 = irs2_phases(ch_, st.sol.psi1, st.sol.w);
        st.objective_trace.push_back(objective(st.orient1, st.orient2, ch_, st.sol));
    }

    void orientation_step(AoPsoState& st, const PsoConfig& pso, int iteration) {
        const double tau = pso.penalty * upper_bound_snr(g_, params_, budget_);
        std::uint64_t redraws = 0;
        ChannelSet scratch;
        auto realize = [&](const Orientation& o1, const Orientation& o2) -> const ChannelSet& {
            if (ao_.redraw_nlos) {
                const auto s = derive_seed(seed_, {kTagRedraw, static_cast<std::uint64_t>(iteration), redraws++});
                ChannelSynthesizer(g_, params_, s, ao_.channel).synthesize_into(o1, o2, scratch);
            } else {
                synth_.synthesize_into(o1, o2, scratch);
            }
            return scratch;
        };
        PsoConfig cfg = pso;
        Orientation o1 = st.orient1, o2 = st.orient2;
        if (ao_.joint_swarm) {
            cfg.seed = derive_seed(pso.seed, {kTagOuter, static_cast<std::uint64_t>(iteration)});
            const std::vector<std::vector<double>> incumbent{{o1.theta, o1.phi, o2.theta, o2.phi}};
            const PsoResult r = pso_optimize(
                [&](std::span<const double> x) {
                    const Orientation a = as_orientation(x, 0), b = as_orientation(x, 2);
                    return penalized_fitness_rician(g_, a, b, realize(a, b), st.sol, budget_, tau, true);
                },
                4, cfg, incumbent);
            o1 = as_orientation(r.best_position, 0);
            o2 = as_orientation(r.best_position, 2);
        } else {
            cfg.seed = derive_seed(pso.seed, {kTagOuter, static_cast<std::uint64_t>(iteration), 1});
            const PsoResult r1 = pso_optimize(
                [&](std::span<const double> x) {
                    const Orientation a = as_orientation(x);
                    return penalized_fitness_rician(g_, a, o2, realize(a, o2), st.sol, budget_, tau, false);
                },
                2, cfg, std::vector<std::vector<double>>{as_point(o1)});
            o1 = as_orientation(r1.best_position);
            cfg.seed = derive_seed(pso.seed, {kTagOuter, static_cast<std::uint64_t>(iteration), 2});
            const PsoResult r2 = pso_optimize(
                [&](std::span<const double> x) {
                    const Orientation b = as_orientation(x);
                    const ChannelSet& ch = realize(o1, b);
                    const ReflectionView v1 = irs1_view(g_, o1), v2 = irs2_view(g_, b);
                    return snr(ch, st.sol, v1.gain(), v2.gain(), budget_) - tau * v2.violation();
                },
                2, cfg, std::vector<std::vector<double>>{as_point(o2)});
            o2 = as_orientation(r2.best_position);
        }
        // Judge the candidate on the trial's own realization; keep the incumbent unless it strictly improves.
        const ChannelSet candidate = synth_(o1, o2);
        const double before = st.objective_trace.back();
        const double after = objective(o1, o2, candidate, st.sol);
        if (after > before) {
            st.orient1 = o1;
            st.orient2 = o2;
            ch_ = candidate;
        }
        st.objective_trace.push_back(std::max(before, after));
    }

private:
    const ScenarioGeometry& g_;
    RicianParams params_;
    LinkBudget budget_;
    AoOptions ao_;
    std::uint64_t seed_;
    ChannelSynthesizer synth_;
    ChannelSet ch_;
};

class SingleAo {
public:
    SingleAo(const SingleIrsGeometry& g, const RicianParams& params, const LinkBudget& budget, const AoOptions& ao,
             std::uint64_t channel_seed)
        : g_(g), params_(params), budget_(budget), synth_(g, params, channel_seed, ao.channel) {}

    double objective(const Orientation& o, const SingleChannelSet& ch, const BeamformingSolution& sol) const {
        return snr_single(ch, sol, credited_gain(single_irs_view(g_, o)), budget_);
    }

    void start(AoPsoState& st) {
        ch_ = synth_(st.orient1);
        st.sol.w = mrt_weights_single(ch_, RVector::Zero(g_.irs_layout().size()), budget_);
        st.sol.psi1 = irs_phases_single(ch_, st.sol.w);
        st.objective_trace = {objective(st.orient1, ch_, st.sol)};
    }

    void beamformer_steps(AoPsoState& st) {
        st.sol.w = mrt_weights_single(ch_, st.sol.psi1, budget_);
        st.objective_trace.push_back(objective(st.orient1, ch_, st.sol));
        st.sol.psi1 = irs_phases_single(ch_, st.sol.w);
        st.objective_trace.push_back(objective(st.orient1, ch_, st.sol));
    }

    void orientation_step(AoPsoState& st, const PsoConfig& pso, int iteration) {
        const double t = (g_.irs_origin() - g_.bs_origin()).norm();
        const double r = (g_.user_pos() - g_.irs_origin()).norm();
        const double n = g_.irs_layout().size();
        const double ub = budget_.pt * params_.beta * params_.beta * n * n * g_.bs_layout().size() /
                          (budget_.noise_power * t * t * r * r);
        const double tau = pso.penalty * ub;
        PsoConfig cfg = pso;
        cfg.seed = derive_seed(pso.seed, {kTagOuter, static_cast<std::uint64_t>(iteration)});
        const PsoResult res = pso_optimize(
            [&](std::span<const double> x) {
                const Orientation o = as_orientation(x);
                const ReflectionView v = single_irs_view(g_, o);
                return snr_single(synth_(o), st.sol, v.gain(), budget_) - tau * v.violation();
            },
            2, cfg, std::vector<std::vector<double>>{as_point(st.orient1)});
        const Orientation o = as_orientation(res.best_position);
        const SingleChannelSet candidate = synth_(o);
        const double before = st.objective_trace.back();
        const double after = objective(o, candidate, st.sol);
        if (after > before) {
            st.orient1 = o;
            ch_ = candidate;
        }
        st.objective_trace.push_back(std::max(before, after));
    }

private:
    const SingleIrsGeometry& g_;
    RicianParams params_;
    LinkBudget budget_;
    SingleChannelSynthesizer synth_;
    SingleChannelSet ch_;
};

template <class Engine>
void run_ao(Engine& engine, AoPsoState& st, const PsoConfig* pso, const AoOptions& ao) {
    if (!(ao.convergence_eps > 0.0)) throw DomainError("convergence_eps must be positive");
    if (ao.max_outer_iters < 1) throw DomainError("max_outer_iters must be at least 1");
    engine.start(st);
    for (int it = 1; it <= ao.max_outer_iters; ++it) {
        const double before = st.objective_trace.back();
        if (pso != nullptr) engine.orientation_step(st, *pso, it);
        engine.beamformer_steps(st);
        st.iteration = it;
        if (!improved_enough(before, st.objective_trace.back(), ao.convergence_eps)) break;
    }
}

}  // namespace

AoPsoState solve_ao_pso(const ScenarioGeometry& g, const RicianParams& params, const LinkBudget& budget,
                        const PsoConfig& pso, const AoOptions& ao, std::uint64_t channel_seed) {
    params.validate();
    budget.validate();
    AoPsoState st;
    const OrientationDesign d = los_orientation_design(g, pso, Scheme{}.fixed);
    st.orient1 = d.orient1;
    st.orient2 = d.orient2;
    DualAo engine(g, params, budget, ao, channel_seed);
    run_ao(engine, st, &pso, ao);
    return st;
}

SchemeResult solve_rician(const Scenario& scenario, const RicianParams& params, const LinkBudget& budget,
                          const Scheme& scheme, const PsoConfig& pso, const AoOptions& ao,
                          std::uint64_t channel_seed) {
    params.validate();
    budget.validate();
    SchemeResult out;
    out.scheme = scheme;
    AoPsoState st;
    if (scheme.is_double()) {
        const ScenarioGeometry& g = scenario.dual;
        if (scheme.is_rotatable()) {
            st = solve_ao_pso(g, params, budget, pso, ao, channel_seed);
        } else {
            check_feasible(scheme.fixed);
            st.orient1 = st.orient2 = scheme.fixed;
            DualAo engine(g, params, budget, ao, channel_seed);
            run_ao(engine, st, nullptr, ao);
        }
        const ReflectionView v1 = irs1_view(g, st.orient1), v2 = irs2_view(g, st.orient2);
        out.infeasible = !(v1.feasible() && v2.feasible());
        out.gain1 = credited_gain(v1);
        out.gain2 = credited_gain(v2);
        out.dist_product = distance_product(g);
    } else {
        const SingleIrsGeometry& g = scenario.single;
        SingleAo engine(g, params, budget, ao, channel_seed);
        if (scheme.is_rotatable()) {
            st.orient1 = los_orientation_design(g, pso, scheme.fixed).orient;
            run_ao(engine, st, &pso, ao);
        } else {
            check_feasible(scheme.fixed);
            st.orient1 = scheme.fixed;
            run_ao(engine, st, nullptr, ao);
        }
        const ReflectionView v = single_irs_view(g, st.orient1);
        out.infeasible = !v.feasible();
        out.gain1 = credited_gain(v);
        out.gain2 = std::numeric_limits<double>::quiet_NaN();
        out.dist_product = distance_product(g);
    }
    out.orient1 = st.orient1;
    out.orient2 = st.orient2;
    out.sol = std::move(st.sol);
    out.snr = st.objective_trace.back();
    out.objective_trace = std::move(st.objective_trace);
    out.outer_iterations = st.iteration;
    return out;
}

}  // namespace rotirs
