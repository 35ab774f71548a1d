#include "rotirs/propcheck.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rotirs/beamform.hpp"
#include "rotirs/channel.hpp"
#include "rotirs/geometry.hpp"
#include "rotirs/pso.hpp"
#include "rotirs/rng.hpp"
#include "rotirs/rotation.hpp"
#include "rotirs/solver.hpp"

namespace rotirs {

namespace {

using Check = std::function<std::string()>;  // empty string = pass

struct Named {
    const char* name;
    Check check;
};

Orientation random_orientation(Rng& rng) {
    std::uniform_real_distribution<double> u(-kHalfPi, kHalfPi);
    const double theta = u(rng);
    return {theta, u(rng)};
}

CMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = n(rng);
            m(i, j) = cplx(re, n(rng));
        }
    }
    return m;
}

ChannelSet random_channels(Rng& rng, int m, int n1, int n2) {
    return {random_matrix(rng, n1, m), random_matrix(rng, n2, n1), random_matrix(rng, n2, 1).col(0)};
}

ScenarioGeometry reference_geometry(int m, int n1, int n2) {
    const double lambda = kSpeedOfLight / 2.4e9;
    return ScenarioGeometry({-7, -15, 0}, {0, 25, 5}, {5, -20, 10}, {15, 20, 0}, near_square_layout(m, lambda / 2),
                            near_square_layout(n1, lambda / 2), near_square_layout(n2, lambda / 2), lambda);
}

std::string fmt(const char* what, double value) {
    std::ostringstream s;
    s << what << " = " << value;
    return s.str();
}

std::vector<Named> geometry_checks() {
    return {
        {"rotation matrices are orthonormal with |det| = 1",
         [] {
             Rng rng(11);
             double worst = 0.0;
             for (int i = 0; i < 10000; ++i) {
                 const Orientation o = random_orientation(rng);
                 for (Surface s : {Surface::Irs1, Surface::Irs2}) {
                     const RotationMatrix q = rotation_matrix(s, o);
                     worst = std::max(worst, (q.transpose() * q - RotationMatrix::Identity()).cwiseAbs().maxCoeff());
                     worst = std::max(worst, std::abs(std::abs(q.determinant()) - 1.0));
                 }
             }
             return worst <= 1e-12 ? "" : fmt("max deviation", worst);
         }},
        {"array axes are unit vectors in the surface plane",
         [] {
             Rng rng(12);
             double worst = 0.0;
             for (int i = 0; i < 2000; ++i) {
                 const Orientation o = random_orientation(rng);
                 for (Surface s : {Surface::Irs1, Surface::Irs2}) {
                     const Vec3 k = rotation_matrix(s, o).col(2);
                     const Vec3 r = row_axis(s, o), c = column_axis(s, o);
                     worst = std::max({worst, std::abs(r.norm() - 1), std::abs(c.norm() - 1), std::abs(r.dot(k)),
                                       std::abs(c.dot(k)), std::abs(r.dot(c))});
                 }
             }
             return worst <= 1e-12 ? "" : fmt("max deviation", worst);
         }},
        {"slacks are projections onto the surface normal",
         [] {
             Rng rng(13);
             const ScenarioGeometry g = reference_geometry(4, 16, 16);
             double worst = 0.0;
             for (int i = 0; i < 2000; ++i) {
                 const Orientation o1 = random_orientation(rng), o2 = random_orientation(rng);
                 const ReflectionSlacks s = feasibility_slacks(g, o1, o2);
                 const Vec3 k1 = rotation_matrix_irs1(o1).col(2), k2 = rotation_matrix_irs2(o2).col(2);
                 worst = std::max({worst, std::abs(s.bs_at_irs1 - k1.dot(g.bs_origin() - g.irs1_origin())),
                                   std::abs(s.irs2_at_irs1 - k1.dot(g.irs2_origin() - g.irs1_origin())),
                                   std::abs(s.irs1_at_irs2 - k2.dot(g.irs1_origin() - g.irs2_origin())),
                                   std::abs(s.user_at_irs2 - k2.dot(g.user_pos() - g.irs2_origin()))});
             }
             return worst <= 1e-12 ? "" : fmt("max deviation", worst);
         }},
        {"feasible orientations have gains in [0, 1]",
         [] {
             Rng rng(14);
             const ScenarioGeometry g = reference_geometry(4, 16, 16);
             for (int i = 0; i < 5000; ++i) {
                 const Orientation o1 = random_orientation(rng), o2 = random_orientation(rng);
                 const ReflectionView v1 = irs1_view(g, o1), v2 = irs2_view(g, o2);
                 if (v1.feasible() && !(v1.gain() >= 0.0 && v1.gain() <= 1.0)) return fmt("gain1", v1.gain());
                 if (v2.feasible() && !(v2.gain() >= 0.0 && v2.gain() <= 1.0)) return fmt("gain2", v2.gain());
             }
             return std::string();
         }},
    };
}

std::vector<Named> channel_checks() {
    return {
        {"LoS phases follow element distances",
         [] {
             Rng rng(21);
             const ScenarioGeometry g = reference_geometry(4, 16, 9);
             const double k = 2.0 * kPi / g.wavelength();
             double worst = 0.0;
             for (int i = 0; i < 20; ++i) {
                 const Orientation o = random_orientation(rng);
                 const auto tx = bs_antenna_positions(g);
                 const auto rx = irs_element_positions(g.irs1_origin(), g.irs1_layout(), o, Surface::Irs1);
                 const CMatrix m = los_matrix(tx, rx, 1e-4, g.wavelength(), 40.0);
                 for (size_t n = 0; n < rx.size(); ++n) {
                     for (size_t j = 0; j < tx.size(); ++j) {
                         const double want = -k * (rx[n] - tx[j]).norm();
                         const double got = std::arg(m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)));
                         worst = std::max(worst, std::abs(wrap_phase(got - want)));
                     }
                 }
             }
             return worst <= 1e-9 ? "" : fmt("max phase error", worst);
         }},
        {"signature factors reproduce the planar LoS matrices",
         [] {
             Rng rng(22);
             const ScenarioGeometry g = reference_geometry(4, 16, 9);
             double worst = 0.0;
             for (int i = 0; i < 20; ++i) {
                 const Orientation o1 = random_orientation(rng), o2 = random_orientation(rng);
                 const LosSignature sig = los_signature_decomposition(g, o1, o2, 1e-4);
                 const auto bs = bs_antenna_positions(g);
                 const auto e1 = irs_element_positions(g.irs1_origin(), g.irs1_layout(), o1, Surface::Irs1);
                 const auto e2 = irs_element_positions(g.irs2_origin(), g.irs2_layout(), o2, Surface::Irs2);
                 const FarFieldDistances d = far_field_distances(g);
                 const CMatrix gp = planar_los_matrix(bs, e1, 1e-4, g.wavelength(), d.t11);
                 const CMatrix sp = planar_los_matrix(e1, e2, 1e-4, g.wavelength(), d.d11);
                 worst = std::max(worst, (sig.g2 * sig.g1.transpose() - gp).norm() / gp.norm());
                 worst = std::max(worst, (sig.s2 * sig.s1.transpose() - sp).norm() / sp.norm());
             }
             return worst <= 1e-10 ? "" : fmt("max relative error", worst);
         }},
        {"infinite Rician factor returns the LoS matrix bit for bit",
         [] {
             Rng rng(23);
             const CMatrix los = random_matrix(rng, 7, 5);
             const CMatrix out = rician_channel(los, kPureLos, 1e-4, 30.0, 99);
             return (out.array() == los.array()).all() ? "" : std::string("entries differ");
         }},
        {"channel synthesis is deterministic in the seed",
         [] {
             const ScenarioGeometry g = reference_geometry(4, 16, 16);
             const RicianParams p = RicianParams::uniform(2.0, 1e-4);
             const ChannelSet a = synthesize_channels(g, {0.1, -0.2}, {-0.3, 0.4}, p, 77);
             const ChannelSet b = synthesize_channels(g, {0.1, -0.2}, {-0.3, 0.4}, p, 77);
             const bool same = (a.g.array() == b.g.array()).all() && (a.s.array() == b.s.array()).all() &&
                               (a.f.array() == b.f.array()).all();
             return same ? "" : std::string("two syntheses differ");
         }},
    };
}

std::vector<Named> beamform_checks() {
    return {
        {"beamformer steps never decrease the SNR",
         [] {
             Rng rng(31);
             const LinkBudget budget;
             for (int i = 0; i < 100; ++i) {
                 const ChannelSet ch = random_channels(rng, 3, 6, 5);
                 BeamformingSolution sol{random_matrix(rng, 3, 1).col(0).normalized(),
                                         RVector::Random(6) * kPi, RVector::Random(5) * kPi};
                 double prev = snr(ch, sol, 1, 1, budget);
                 for (int step = 0; step < 6; ++step) {
                     if (step % 3 == 0) sol.w = mrt_weights(ch, sol.psi1, sol.psi2, budget);
                     if (step % 3 == 1) sol.psi1 = irs1_phases(ch, sol.psi2, sol.w);
                     if (step % 3 == 2) sol.psi2 = irs2_phases(ch, sol.psi1, sol.w);
                     const double now = snr(ch, sol, 1, 1, budget);
                     if (now < prev * (1.0 - 1e-10)) return fmt("decrease to fraction", now / prev);
                     prev = now;
                 }
             }
             return std::string();
         }},
        {"MRT spends exactly the power budget",
         [] {
             Rng rng(32);
             const LinkBudget budget{2.5, 1e-11};
             double worst = 0.0;
             for (int i = 0; i < 100; ++i) {
                 const ChannelSet ch = random_channels(rng, 4, 5, 3);
                 const CVector w = mrt_weights(ch, RVector::Random(5), RVector::Random(3), budget);
                 worst = std::max(worst, std::abs(w.squaredNorm() - budget.pt) / budget.pt);
             }
             return worst <= 1e-9 ? "" : fmt("max relative error", worst);
         }},
        {"optimal SNR scales linearly with transmit power",
         [] {
             Rng rng(33);
             for (int i = 0; i < 50; ++i) {
                 const ChannelSet ch = random_channels(rng, 3, 4, 4);
                 const RVector p1 = RVector::Random(4), p2 = RVector::Random(4);
                 const LinkBudget a{1.0, 1e-11}, b{7.0, 1e-11};
                 const double sa = snr(ch, {mrt_weights(ch, p1, p2, a), p1, p2}, 1, 1, a);
                 const double sb = snr(ch, {mrt_weights(ch, p1, p2, b), p1, p2}, 1, 1, b);
                 if (std::abs(sb / sa - 7.0) > 7e-10) return fmt("ratio", sb / sa);
             }
             return std::string();
         }},
    };
}

std::vector<Named> rotation_checks() {
    return {
        {"swarm trace is nondecreasing and stays in the box",
         [] {
             for (std::uint64_t seed = 1; seed <= 20; ++seed) {
                 PsoConfig cfg;
                 cfg.swarm_size = 20;
                 cfg.max_iters = 30;
                 cfg.seed = seed;
                 bool outside = false;
                 const PsoResult r = pso_optimize(
                     [&](std::span<const double> x) {
                         double s = 0.0;
                         for (double v : x) {
                             outside = outside || v < -kHalfPi || v > kHalfPi;
                             s += std::sin(3.0 * v) - 0.2 * v * v;
                         }
                         return s;
                     },
                     4, cfg);
                 if (outside) return std::string("a particle left the box");
                 for (size_t t = 1; t < r.trace.size(); ++t) {
                     if (r.trace[t] < r.trace[t - 1]) return fmt("trace decreased at", static_cast<double>(t));
                 }
                 if (r.best_fitness != r.trace.back()) return std::string("best fitness differs from trace end");
             }
             return std::string();
         }},
        {"closed-form azimuth beats every azimuth on a fine grid",
         [] {
             Rng rng(41);
             std::uniform_real_distribution<double> u(-30.0, 30.0);
             const double lambda = kSpeedOfLight / 2.4e9;
             const ArrayLayout one = near_square_layout(1, lambda / 2);
             int checked = 0;
             for (int i = 0; i < 200 && checked < 50; ++i) {
                 const Vec3 irs(0, 0, 0);
                 const Vec3 src(u(rng), u(rng), 0), dst(u(rng), u(rng), 0);
                 const SingleIrsGeometry g(src, irs, dst, one, one, lambda);
                 double theta;
                 try {
                     theta = closed_form_azimuth_single(g);
                 } catch (const DegenerateGeometryError&) {
                     continue;
                 }
                 ++checked;
                 const double best = single_irs_view(g, {theta, 0.0}).gain();
                 for (int k = 0; k <= 720; ++k) {
                     const double t = -kHalfPi + k * kPi / 720.0;
                     const ReflectionView v = single_irs_view(g, {t, 0.0});
                     if (v.feasible() && v.gain() > best + 1e-12) return fmt("grid gain exceeds by", v.gain() - best);
                 }
             }
             return checked > 0 ? "" : std::string("no feasible planar instance drawn");
         }},
    };
}

std::vector<Named> solver_checks() {
    return {
        {"AO-PSO objective trace is nondecreasing",
         [] {
             const ScenarioGeometry g = reference_geometry(2, 16, 16);
             PsoConfig pso;
             pso.swarm_size = 12;
             pso.max_iters = 8;
             AoOptions ao;
             ao.max_outer_iters = 4;
             for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                 pso.seed = seed;
                 const AoPsoState st = solve_ao_pso(g, RicianParams::uniform(1.0, 1e-4), LinkBudget{}, pso, ao, seed);
                 for (size_t t = 1; t < st.objective_trace.size(); ++t) {
                     const double a = st.objective_trace[t - 1], b = st.objective_trace[t];
                     if (b < a * (1.0 - 1e-9)) return fmt("relative drop", (a - b) / a);
                 }
             }
             return std::string();
         }},
        {"rotatable schemes dominate fixed ones under LoS",
         [] {
             const ScenarioGeometry g = reference_geometry(8, 32, 32);
             const Scenario sc = make_scenario(g, g.irs1_origin());
             PsoConfig pso;
             pso.swarm_size = 30;
             pso.max_iters = 20;
             const RicianParams p = RicianParams::uniform(kPureLos, 1e-4);
             const LinkBudget b;
             const double dr = solve_los(sc, p, b, {SchemeKind::DoubleRotatable}, pso).snr;
             const double df = solve_los(sc, p, b, {SchemeKind::DoubleFixed}, pso).snr;
             const double sr = solve_los(sc, p, b, {SchemeKind::SingleRotatable}, pso).snr;
             const double sf = solve_los(sc, p, b, {SchemeKind::SingleFixed}, pso).snr;
             if (dr < df * (1 - 1e-9)) return fmt("double rotatable / fixed", dr / df);
             if (sr < sf * (1 - 1e-9)) return fmt("single rotatable / fixed", sr / sf);
             return std::string();
         }},
    };
}

std::vector<Named> suite_checks(const std::string& suite) {
    if (suite == "geometry") return geometry_checks();
    if (suite == "channel") return channel_checks();
    if (suite == "beamform") return beamform_checks();
    if (suite == "rotation") return rotation_checks();
    if (suite == "solver") return solver_checks();
    throw std::invalid_argument("unknown property suite '" + suite + "'");
}

}  // namespace

std::vector<std::string> property_suite_names() { return {"geometry", "channel", "beamform", "rotation", "solver", "all"}; }

std::vector<PropertyOutcome> run_property_suite(const std::string& suite) {
    std::vector<std::string> suites;
    if (suite == "all") {
        suites = {"geometry", "channel", "beamform", "rotation", "solver"};
    } else {
        suites = {suite};
    }
    std::vector<PropertyOutcome> out;
    for (const std::string& s : suites) {
        for (const Named& c : suite_checks(s)) {
            PropertyOutcome o{s, c.name, false, ""};
            try {
                o.detail = c.check();
                o.passed = o.detail.empty();
            } catch (const std::exception& e) {
                o.detail = std::string("threw: ") + e.what();
            }
            out.push_back(std::move(o));
        }
    }
    return out;
}

}  // namespace rotirs
