#include <cmath>

#include "doctest.h"
#include "rotirs/pso.hpp"
#include "rotirs/rotation.hpp"
#include "support.hpp"

using namespace rotirs;
using testing::projected_geometry;
using testing::reference_geometry;

namespace {

constexpr int kGridPoints = 721;
constexpr double kGridStep = kPi / (kGridPoints - 1);

double grid_angle(int i) { return -kHalfPi + i * kGridStep; }

// Literal half-angle formula with arccos bearings measured from +y.
double literal_azimuth(const Vec3& origin, const Vec3& a, const Vec3& b) {
    auto bearing = [&](const Vec3& p) {
        const Vec3 d = p - origin;
        return std::acos(d.y() / std::hypot(d.x(), d.y()));
    };
    return (kPi - bearing(a) - bearing(b)) / 2.0;
}

}  // namespace

TEST_CASE("symmetric endpoints give a zero azimuth") {
    const Vec3 o{0, 0, 0};
    CHECK(std::abs(closed_form_azimuth(o, {1, 1, 0}, {1, -1, 0}, Surface::Irs1)) < 1e-15);
    CHECK(std::abs(closed_form_azimuth(o, {1, 1, 0}, {1, -1, 0}, Surface::Irs2)) < 1e-15);
    CHECK(std::abs(closed_form_azimuth(o, {3, 2, 0}, {3, -2, 0}, Surface::Irs1)) < 1e-15);
}

TEST_CASE("normal bearing convention differs between the surfaces") {
    const Vec3 o{0, 0, 0};
    const double t1 = closed_form_azimuth(o, {1, 2, 0}, {2, 1, 0}, Surface::Irs1);
    const double t2 = closed_form_azimuth(o, {1, 2, 0}, {2, 1, 0}, Surface::Irs2);
    CHECK(t1 == doctest::Approx(kPi / 4));
    CHECK(t2 == doctest::Approx(-kPi / 4));
}

TEST_CASE("closed-form azimuth needs planar anchors and a reachable front side") {
    CHECK_THROWS_AS(closed_form_azimuth_irs1(reference_geometry(1, 4, 4)), DegenerateGeometryError);
    // Endpoints straddling the surface on opposite sides.
    CHECK_THROWS_AS(closed_form_azimuth({0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, Surface::Irs1), DegenerateGeometryError);
    // Both endpoints behind every reachable normal (bearing pi).
    CHECK_THROWS_AS(closed_form_azimuth({0, 0, 0}, {-1, 0.01, 0}, {-1, -0.01, 0}, Surface::Irs1),
                    DegenerateGeometryError);
}

TEST_CASE("closed-form azimuth matches a 721-point grid on the projected geometry") {
    const ScenarioGeometry g = projected_geometry(1, 4, 4);
    const double t1 = closed_form_azimuth_irs1(g);
    const double t2 = closed_form_azimuth_irs2(g);

    int arg1 = 0, arg2 = 0;
    double best1 = -1e300, best2 = -1e300;
    for (int i = 0; i < kGridPoints; ++i) {
        const double f1 = penalized_fitness_los_irs1(g, {grid_angle(i), 0.0}, 1e3);
        const double f2 = penalized_fitness_los_irs2(g, {grid_angle(i), 0.0}, 1e3);
        if (f1 > best1) best1 = f1, arg1 = i;
        if (f2 > best2) best2 = f2, arg2 = i;
    }
    CHECK(std::abs(t1 - grid_angle(arg1)) <= kGridStep);
    CHECK(std::abs(t2 - grid_angle(arg2)) <= kGridStep);
    const double g1 = irs1_view(g, {t1, 0.0}).gain();
    const double g2 = irs2_view(g, {t2, 0.0}).gain();
    CHECK(g1 >= best1 - 1e-12);
    CHECK(g2 >= best2 - 1e-12);
    CHECK(irs1_view(g, {t1, 0.0}).feasible());
    CHECK(irs2_view(g, {t2, 0.0}).feasible());

    // The literal half-angle expression lands elsewhere and does worse here.
    const double lit1 = literal_azimuth(g.irs1_origin(), g.bs_origin(), g.irs2_origin());
    CHECK(lit1 == doctest::Approx(-1.4289).epsilon(1e-4));
    CHECK(irs1_view(g, {lit1, 0.0}).gain() < g1 - 1e-3);
}

TEST_CASE("reachable bisector gives gain (1 + cos spread) / 2") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const double a = u(rng), b = u(rng);
        const Vec3 src{5 * std::cos(a), 5 * std::sin(a), 0}, snk{9 * std::cos(b), 9 * std::sin(b), 0};
        const double spread = std::acos(std::cos(a - b));
        double theta;
        try {
            theta = closed_form_azimuth({0, 0, 0}, src, snk, Surface::Irs1);
        } catch (const DegenerateGeometryError&) {
            continue;
        }
        const ReflectionView v = reflection_view({0, 0, 0}, rotation_matrix_irs1({theta, 0}), src, snk);
        REQUIRE(v.feasible());
        const Eigen::Vector2d bis = Eigen::Vector2d(std::cos(a), std::sin(a)) + Eigen::Vector2d(std::cos(b), std::sin(b));
        const double bisector = std::atan2(bis.y(), bis.x());
        if (std::abs(bisector) <= kHalfPi) {
            REQUIRE(v.gain() == doctest::Approx((1 + std::cos(spread)) / 2).epsilon(1e-12));
            ++checked;
        }
        // Never beaten by the azimuth grid at zero elevation.
        for (int k = 0; k < kGridPoints; ++k) {
            const ReflectionView w = reflection_view({0, 0, 0}, rotation_matrix_irs1({grid_angle(k), 0}), src, snk);
            if (w.feasible()) REQUIRE(w.gain() <= v.gain() + 1e-12);
        }
    }
    CHECK(checked > 200);
}

TEST_CASE("elevation never helps at the optimal azimuth") {
    const ScenarioGeometry g = projected_geometry(1, 4, 4);
    const double t1 = closed_form_azimuth_irs1(g), t2 = closed_form_azimuth_irs2(g);
    const double f1 = irs1_view(g, {t1, 0.0}).gain(), f2 = irs2_view(g, {t2, 0.0}).gain();
    for (int i = 0; i < 1001; ++i) {
        const double phi = -kHalfPi + i * kPi / 1000;
        REQUIRE(irs1_view(g, {t1, phi}).gain() <= f1 + 1e-12);
        REQUIRE(irs2_view(g, {t2, phi}).gain() <= f2 + 1e-12);
    }
}

TEST_CASE("penalized LoS fitness") {
    const ScenarioGeometry g = reference_geometry(1, 4, 4);
    std::mt19937_64 rng(22);
    int feasible = 0, infeasible = 0;
    for (int i = 0; i < 2000; ++i) {
        const Orientation o = testing::random_orientation(rng);
        const ReflectionView v = irs1_view(g, o);
        const double f = penalized_fitness_los_irs1(g, o, 1e3);
        if (v.feasible()) {
            REQUIRE(f == v.gain());
            ++feasible;
        } else {
            REQUIRE(f == doctest::Approx(v.gain() - 1e3 * v.violation()));
            REQUIRE(f < -1e3 * 1e-9 + 1.0);
            ++infeasible;
        }
        CHECK(penalized_fitness_los_irs1(g, o, 0.0) == v.gain());
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
}

TEST_CASE("with tau = 1e3 the penalized grid optimum is feasible") {
    const ScenarioGeometry g = reference_geometry(1, 4, 4);
    double best = -1e300;
    Orientation arg;
    for (int i = 0; i < 181; ++i)
        for (int j = 0; j < 181; ++j) {
            const Orientation o{-kHalfPi + i * kPi / 180, -kHalfPi + j * kPi / 180};
            const double f = penalized_fitness_los_irs2(g, o, 1e3);
            if (f > best) best = f, arg = o;
        }
    CHECK(irs2_view(g, arg).feasible());
    CHECK(best > 0.0);
}

TEST_CASE("inertia weight decreases linearly between its endpoints") {
    PsoConfig cfg;
    cfg.max_iters = 40;
    CHECK(inertia_weight(cfg, 0) == doctest::Approx(0.9));
    CHECK(inertia_weight(cfg, 40) == doctest::Approx(0.4));
    CHECK(inertia_weight(cfg, 20) == doctest::Approx(0.65));
}

TEST_CASE("swarm configuration is validated") {
    PsoConfig cfg;
    cfg.swarm_size = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = PsoConfig{};
    cfg.max_iters = -1;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("swarm finds the maximum of a concave quadratic") {
    PsoConfig cfg;
    cfg.swarm_size = 50;
    cfg.max_iters = 100;
    cfg.seed = 5;
    const PsoResult r = pso_optimize(
        [](std::span<const double> x) { return -std::pow(x[0] - 0.3, 2) - std::pow(x[1] + 0.7, 2); }, 2, cfg);
    CHECK(std::abs(r.best_position[0] - 0.3) < 1e-2);
    CHECK(std::abs(r.best_position[1] + 0.7) < 1e-2);
    CHECK(r.trace.size() == 101u);
    CHECK(r.iterations == 100);
}

TEST_CASE("swarm results are deterministic, monotone and respect seeds") {
    const ScenarioGeometry g = reference_geometry(1, 4, 4);
    const Fitness fit = [&](std::span<const double> x) { return penalized_fitness_los_irs1(g, {x[0], x[1]}, 1e3); };
    PsoConfig cfg;
    cfg.seed = 77;
    const PsoResult a = pso_optimize(fit, 2, cfg), b = pso_optimize(fit, 2, cfg);
    CHECK(a.best_position == b.best_position);
    CHECK(a.trace == b.trace);
    for (size_t t = 1; t < a.trace.size(); ++t) REQUIRE(a.trace[t] >= a.trace[t - 1]);
    CHECK(a.best_fitness == a.trace.back());

    // A seeded particle bounds the result from below.
    PsoConfig tiny;
    tiny.swarm_size = 2;
    tiny.max_iters = 1;
    const std::vector<std::vector<double>> seeds{{0.4, 0.1}};
    const PsoResult s = pso_optimize(fit, 2, tiny, seeds);
    CHECK(s.best_fitness >= fit(seeds[0]));
}

TEST_CASE("swarm reaches the 721 x 721 grid optimum on the 3-D geometry") {
    const ScenarioGeometry g = reference_geometry(1, 4, 4);
    double grid1 = -1e300, grid2 = -1e300;
    for (int i = 0; i < kGridPoints; ++i)
        for (int j = 0; j < kGridPoints; ++j) {
            const Orientation o{grid_angle(i), grid_angle(j)};
            grid1 = std::max(grid1, penalized_fitness_los_irs1(g, o, 1e3));
            grid2 = std::max(grid2, penalized_fitness_los_irs2(g, o, 1e3));
        }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PsoConfig cfg;
        cfg.seed = seed;
        const PsoResult r1 = pso_optimize(
            [&](std::span<const double> x) { return penalized_fitness_los_irs1(g, {x[0], x[1]}, 1e3); }, 2, cfg);
        const PsoResult r2 = pso_optimize(
            [&](std::span<const double> x) { return penalized_fitness_los_irs2(g, {x[0], x[1]}, 1e3); }, 2, cfg);
        CHECK(r1.best_fitness >= 0.999 * grid1);
        CHECK(r2.best_fitness >= 0.999 * grid2);
    }
}

TEST_CASE("the lagged update order is available and still monotone") {
    PsoConfig cfg;
    cfg.velocity_first = false;
    cfg.seed = 8;
    const PsoResult r = pso_optimize(
        [](std::span<const double> x) { return -std::pow(x[0] - 0.3, 2) - std::pow(x[1] + 0.7, 2); }, 2, cfg);
    for (size_t t = 1; t < r.trace.size(); ++t) REQUIRE(r.trace[t] >= r.trace[t - 1]);
    cfg.velocity_first = true;
    const PsoResult s = pso_optimize(
        [](std::span<const double> x) { return -std::pow(x[0] - 0.3, 2) - std::pow(x[1] + 0.7, 2); }, 2, cfg);
    CHECK(r.best_position != s.best_position);
}
