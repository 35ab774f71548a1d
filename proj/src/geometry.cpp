#include "rotirs/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace rotirs {

namespace {

constexpr double kAnchorTolerance = 1e-9;

void check_layout(const ArrayLayout& l, const char* name) {
    if (l.rows < 1 || l.cols < 1) {
        throw DomainError(std::string(name) + ": array layout must have at least one row and column");
    }
    if (!(l.spacing > 0.0) || !std::isfinite(l.spacing)) {
        throw DomainError(std::string(name) + ": element spacing must be positive");
    }
}

void check_distinct(const std::vector<std::pair<const char*, Vec3>>& anchors) {
    for (size_t i = 0; i < anchors.size(); ++i) {
        if (!anchors[i].second.allFinite()) {
            throw DomainError(std::string(anchors[i].first) + " position is not finite");
        }
        for (size_t j = i + 1; j < anchors.size(); ++j) {
            if ((anchors[i].second - anchors[j].second).norm() <= kAnchorTolerance) {
                throw DegenerateGeometryError(std::string(anchors[i].first) + " and " +
                                              anchors[j].first + " coincide");
            }
        }
    }
}

void check_wavelength(double wavelength) {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw DomainError("wavelength must be positive");
    }
}

double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

}  // namespace

void check_feasible(const Orientation& o) {
    auto check = [](double v, const char* name) {
        if (!(v >= -kHalfPi && v <= kHalfPi)) {
            std::ostringstream msg;
            msg << name << " = " << v << " rad is outside [-pi/2, pi/2]";
            throw DomainError(msg.str());
        }
    };
    check(o.theta, "theta");
    check(o.phi, "phi");
}

ArrayLayout near_square_layout(int count, double spacing) {
    if (count < 1) throw DomainError("element count must be positive");
    int rows = static_cast<int>(std::sqrt(static_cast<double>(count)));
    while (rows > 1 && count % rows != 0) --rows;
    return ArrayLayout{rows, count / rows, spacing};
}

ScenarioGeometry::ScenarioGeometry(Vec3 bs_origin, Vec3 irs1_origin, Vec3 irs2_origin, Vec3 user_pos,
                                   ArrayLayout bs_layout, ArrayLayout irs1_layout,
                                   ArrayLayout irs2_layout, double wavelength)
    : bs_origin_(bs_origin),
      irs1_origin_(irs1_origin),
      irs2_origin_(irs2_origin),
      user_pos_(user_pos),
      bs_layout_(bs_layout),
      irs1_layout_(irs1_layout),
      irs2_layout_(irs2_layout),
      wavelength_(wavelength) {
    check_layout(bs_layout_, "BS");
    check_layout(irs1_layout_, "IRS 1");
    check_layout(irs2_layout_, "IRS 2");
    check_wavelength(wavelength_);
    check_distinct({{"BS", bs_origin_}, {"IRS 1", irs1_origin_}, {"IRS 2", irs2_origin_}, {"user", user_pos_}});
}

ScenarioGeometry ScenarioGeometry::with_irs_layouts(ArrayLayout irs1, ArrayLayout irs2) const {
    return ScenarioGeometry(bs_origin_, irs1_origin_, irs2_origin_, user_pos_, bs_layout_, irs1, irs2,
                            wavelength_);
}

SingleIrsGeometry::SingleIrsGeometry(Vec3 bs_origin, Vec3 irs_origin, Vec3 user_pos, ArrayLayout bs_layout,
                                     ArrayLayout irs_layout, double wavelength)
    : bs_origin_(bs_origin),
      irs_origin_(irs_origin),
      user_pos_(user_pos),
      bs_layout_(bs_layout),
      irs_layout_(irs_layout),
      wavelength_(wavelength) {
    check_layout(bs_layout_, "BS");
    check_layout(irs_layout_, "IRS");
    check_wavelength(wavelength_);
    check_distinct({{"BS", bs_origin_}, {"IRS", irs_origin_}, {"user", user_pos_}});
}

RotationMatrix rotation_matrix_irs1(const Orientation& o) {
    check_feasible(o);
    const double ct = std::cos(o.theta), st = std::sin(o.theta);
    const double cp = std::cos(o.phi), sp = std::sin(o.phi);
    RotationMatrix q;
    q << ct * sp, -st, ct * cp,
         st * sp,  ct, st * cp,
         -cp,     0.0, sp;
    return q;
}

RotationMatrix rotation_matrix_irs2(const Orientation& o) {
    check_feasible(o);
    const double ct = std::cos(o.theta), st = std::sin(o.theta);
    const double cp = std::cos(o.phi), sp = std::sin(o.phi);
    RotationMatrix q;
    q << ct * sp,  st, ct * cp,
         -st * sp, ct, -st * cp,
         -cp,     0.0, sp;
    return q;
}

RotationMatrix rotation_matrix(Surface s, const Orientation& o) {
    return s == Surface::Irs1 ? rotation_matrix_irs1(o) : rotation_matrix_irs2(o);
}

Vec3 row_axis(Surface s, const Orientation& o) {
    const double ct = std::cos(o.theta), st = std::sin(o.theta);
    if (s == Surface::Irs1) return Vec3(st, -ct, 0.0);
    return Vec3(st, ct, 0.0);
}

Vec3 column_axis(Surface s, const Orientation& o) {
    const double ct = std::cos(o.theta), st = std::sin(o.theta);
    const double cp = std::cos(o.phi), sp = std::sin(o.phi);
    if (s == Surface::Irs1) return Vec3(-ct * sp, -st * sp, cp);
    return Vec3(-ct * sp, st * sp, cp);
}

std::vector<Vec3> irs_element_positions(const Vec3& origin, const ArrayLayout& layout, const Orientation& o,
                                        Surface s) {
    check_feasible(o);
    const Vec3 step_col = layout.spacing * row_axis(s, o);
    const Vec3 step_row = layout.spacing * column_axis(s, o);
    std::vector<Vec3> out;
    out.reserve(static_cast<size_t>(layout.size()));
    for (int n = 0; n < layout.size(); ++n) {
        const int row = n / layout.cols;
        const int col = n - layout.cols * row;
        out.emplace_back(origin + col * step_col + row * step_row);
    }
    return out;
}

std::vector<Vec3> bs_antenna_positions(const Vec3& origin, const ArrayLayout& layout) {
    const Vec3 mr(0.0, 1.0, 0.0);
    const Vec3 mc(-1.0, 0.0, 0.0);
    std::vector<Vec3> out;
    out.reserve(static_cast<size_t>(layout.size()));
    for (int m = 0; m < layout.size(); ++m) {
        const int row = m / layout.cols;
        const int col = m - layout.cols * row;
        out.emplace_back(origin + col * layout.spacing * mc + row * layout.spacing * mr);
    }
    return out;
}

std::vector<Vec3> bs_antenna_positions(const ScenarioGeometry& g) {
    return bs_antenna_positions(g.bs_origin(), g.bs_layout());
}

Vec3 local_coordinates(const Vec3& point, const Vec3& frame_origin, const RotationMatrix& q) {
    return q.transpose() * (point - frame_origin);
}

double ReflectionView::gain() const { return aperture_gain(incident_angle, reflected_angle); }

double ReflectionView::violation() const {
    return std::max(0.0, -incident_slack) + std::max(0.0, -reflected_slack);
}

ReflectionView reflection_view(const Vec3& origin, const RotationMatrix& q, const Vec3& source,
                               const Vec3& sink) {
    const double d_src = (source - origin).norm();
    const double d_snk = (sink - origin).norm();
    if (d_src == 0.0 || d_snk == 0.0) {
        throw DegenerateGeometryError("reflection endpoint coincides with the surface anchor");
    }
    ReflectionView v;
    v.incident_slack = local_coordinates(source, origin, q).z();
    v.reflected_slack = local_coordinates(sink, origin, q).z();
    v.incident_angle = clamped_acos(v.incident_slack / d_src);
    v.reflected_angle = clamped_acos(v.reflected_slack / d_snk);
    return v;
}

ReflectionView irs1_view(const ScenarioGeometry& g, const Orientation& o1) {
    return reflection_view(g.irs1_origin(), rotation_matrix_irs1(o1), g.bs_origin(), g.irs2_origin());
}

ReflectionView irs2_view(const ScenarioGeometry& g, const Orientation& o2) {
    return reflection_view(g.irs2_origin(), rotation_matrix_irs2(o2), g.irs1_origin(), g.user_pos());
}

ReflectionView single_irs_view(const SingleIrsGeometry& g, const Orientation& o) {
    return reflection_view(g.irs_origin(), rotation_matrix_irs1(o), g.bs_origin(), g.user_pos());
}

ElevationAngles elevation_angles(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2) {
    const ReflectionView v1 = irs1_view(g, o1);
    const ReflectionView v2 = irs2_view(g, o2);
    return ElevationAngles{v1.incident_angle, v1.reflected_angle, v2.incident_angle, v2.reflected_angle};
}

double aperture_gain(double phi_i, double phi_r) { return std::cos(phi_i) * std::cos(phi_r); }

ApertureGains aperture_gains(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2) {
    return ApertureGains{irs1_view(g, o1).gain(), irs2_view(g, o2).gain()};
}

bool ReflectionSlacks::feasible() const {
    return bs_at_irs1 >= 0.0 && irs2_at_irs1 >= 0.0 && irs1_at_irs2 >= 0.0 && user_at_irs2 >= 0.0;
}

double ReflectionSlacks::irs1_violation() const {
    return std::max(0.0, -bs_at_irs1) + std::max(0.0, -irs2_at_irs1);
}

double ReflectionSlacks::irs2_violation() const {
    return std::max(0.0, -irs1_at_irs2) + std::max(0.0, -user_at_irs2);
}

ReflectionSlacks feasibility_slacks(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2) {
    const ReflectionView v1 = irs1_view(g, o1);
    const ReflectionView v2 = irs2_view(g, o2);
    return ReflectionSlacks{v1.incident_slack, v1.reflected_slack, v2.incident_slack, v2.reflected_slack};
}

}  // namespace rotirs
