#include "rotirs/rotation.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace rotirs {

namespace {

constexpr double kPlaneTolerance = 1e-12;

void require_plane(const Vec3& p, const char* name) {
    if (std::abs(p.z()) > kPlaneTolerance) {
        throw DegenerateGeometryError(std::string("closed-form azimuth needs z = 0, but ") + name +
                                      " has z = " + std::to_string(p.z()));
    }
}

}  // namespace

double closed_form_azimuth(const Vec3& origin, const Vec3& source, const Vec3& sink, Surface s) {
    require_plane(origin, "the surface anchor");
    require_plane(source, "the source");
    require_plane(sink, "the sink");
    const Eigen::Vector2d ua = (source - origin).head<2>().normalized();
    const Eigen::Vector2d ub = (sink - origin).head<2>().normalized();
    const Eigen::Vector2d mid = ua + ub;
    if (mid.norm() < 1e-12) {
        throw DegenerateGeometryError("source and sink are on opposite sides of the surface anchor");
    }
    const double bisector = std::atan2(mid.y(), mid.x());
    const double spread = std::acos(std::clamp(ua.dot(ub), -1.0, 1.0));
    // Both endpoints stay in front while the normal is within this of the bisector.
    const double half_width = kHalfPi - 0.5 * spread;
    const double sign = (s == Surface::Irs1) ? 1.0 : -1.0;

    double best = std::numeric_limits<double>::quiet_NaN();
    double best_offset = std::numeric_limits<double>::infinity();
    for (double shift : std::array{-2.0 * kPi, 0.0, 2.0 * kPi}) {
        const double center = sign * bisector + shift;
        const double lo = std::max(center - half_width, -kHalfPi);
        const double hi = std::min(center + half_width, kHalfPi);
        if (lo > hi) continue;
        const double theta = std::clamp(center, lo, hi);
        const double offset = std::abs(theta - center);
        if (offset < best_offset) {
            best_offset = offset;
            best = theta;
        }
    }
    if (std::isnan(best)) {
        throw DegenerateGeometryError("no azimuth in [-pi/2, pi/2] keeps both endpoints on the reflective side");
    }
    return best;
}

double closed_form_azimuth_irs1(const ScenarioGeometry& g) {
    return closed_form_azimuth(g.irs1_origin(), g.bs_origin(), g.irs2_origin(), Surface::Irs1);
}

double closed_form_azimuth_irs2(const ScenarioGeometry& g) {
    return closed_form_azimuth(g.irs2_origin(), g.irs1_origin(), g.user_pos(), Surface::Irs2);
}

double closed_form_azimuth_single(const SingleIrsGeometry& g) {
    return closed_form_azimuth(g.irs_origin(), g.bs_origin(), g.user_pos(), Surface::Irs1);
}

double penalized_fitness_los_irs1(const ScenarioGeometry& g, const Orientation& o1, double tau) {
    const ReflectionView v = irs1_view(g, o1);
    return v.gain() - tau * v.violation();
}

double penalized_fitness_los_irs2(const ScenarioGeometry& g, const Orientation& o2, double tau) {
    const ReflectionView v = irs2_view(g, o2);
    return v.gain() - tau * v.violation();
}

double penalized_fitness_los_single(const SingleIrsGeometry& g, const Orientation& o, double tau) {
    const ReflectionView v = single_irs_view(g, o);
    return v.gain() - tau * v.violation();
}

double penalized_fitness_rician(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2,
                                const ChannelSet& channels, const BeamformingSolution& sol,
                                const LinkBudget& budget, double tau, bool include_irs2) {
    const ReflectionView v1 = irs1_view(g, o1);
    const ReflectionView v2 = irs2_view(g, o2);
    double violation = v1.violation();
    if (include_irs2) violation += v2.violation();
    return snr(channels, sol, v1.gain(), v2.gain(), budget) - tau * violation;
}

}  // namespace rotirs
