#pragma once

#include <vector>

#include "rotirs/types.hpp"

namespace rotirs {

/// Azimuth/elevation of a surface normal, radians. Feasible box is [-pi/2, pi/2]^2.
struct Orientation {
    double theta = 0.0;
    double phi = 0.0;
};

/// Throws DomainError naming the offending angle when `o` leaves the feasible box.
void check_feasible(const Orientation& o);

/// Rectangular planar array: rows x cols elements, uniform spacing in meters.
struct ArrayLayout {
    int rows = 1;
    int cols = 1;
    double spacing = 0.0;

    int size() const { return rows * cols; }
};

/// Most-square factorization rows x cols = count with rows <= cols.
ArrayLayout near_square_layout(int count, double spacing);

/// Which surface's printed axis and rotation conventions to use.
enum class Surface { Irs1, Irs2 };

/// Anchor positions, array layouts and wavelength of the double-IRS link.
/// Validated once on construction: nonempty layouts, positive spacings and
/// wavelength, pairwise distinct anchors.
class ScenarioGeometry {
public:
    ScenarioGeometry(Vec3 bs_origin, Vec3 irs1_origin, Vec3 irs2_origin, Vec3 user_pos,
                     ArrayLayout bs_layout, ArrayLayout irs1_layout, ArrayLayout irs2_layout,
                     double wavelength);

    const Vec3& bs_origin() const { return bs_origin_; }
    const Vec3& irs1_origin() const { return irs1_origin_; }
    const Vec3& irs2_origin() const { return irs2_origin_; }
    const Vec3& user_pos() const { return user_pos_; }
    const ArrayLayout& bs_layout() const { return bs_layout_; }
    const ArrayLayout& irs1_layout() const { return irs1_layout_; }
    const ArrayLayout& irs2_layout() const { return irs2_layout_; }
    double wavelength() const { return wavelength_; }

    int bs_antennas() const { return bs_layout_.size(); }
    int irs1_elements() const { return irs1_layout_.size(); }
    int irs2_elements() const { return irs2_layout_.size(); }

    /// Same anchors, new surface layouts (re-validated).
    ScenarioGeometry with_irs_layouts(ArrayLayout irs1, ArrayLayout irs2) const;

private:
    Vec3 bs_origin_, irs1_origin_, irs2_origin_, user_pos_;
    ArrayLayout bs_layout_, irs1_layout_, irs2_layout_;
    double wavelength_;
};

/// BS -> single IRS -> user link. The surface uses the IRS-1 conventions.
class SingleIrsGeometry {
public:
    SingleIrsGeometry(Vec3 bs_origin, Vec3 irs_origin, Vec3 user_pos, ArrayLayout bs_layout,
                      ArrayLayout irs_layout, double wavelength);

    const Vec3& bs_origin() const { return bs_origin_; }
    const Vec3& irs_origin() const { return irs_origin_; }
    const Vec3& user_pos() const { return user_pos_; }
    const ArrayLayout& bs_layout() const { return bs_layout_; }
    const ArrayLayout& irs_layout() const { return irs_layout_; }
    double wavelength() const { return wavelength_; }

private:
    Vec3 bs_origin_, irs_origin_, user_pos_;
    ArrayLayout bs_layout_, irs_layout_;
    double wavelength_;
};

/// Columns are the local e_x, e_y, e_z of IRS 1, entries exactly as printed for Q1.
RotationMatrix rotation_matrix_irs1(const Orientation& o);
/// Columns are the local e_x, e_y, e_z of IRS 2 (sign pattern of Q2).
RotationMatrix rotation_matrix_irs2(const Orientation& o);
RotationMatrix rotation_matrix(Surface s, const Orientation& o);

/// Row axis m^r and column axis m^c of a surface in the global frame.
Vec3 row_axis(Surface s, const Orientation& o);
Vec3 column_axis(Surface s, const Orientation& o);

/// Element n (0-based here) sits at origin + col(n)*l*m^r + row(n)*l*m^c with
/// row(n) = n / cols, col(n) = n - cols*row(n).
std::vector<Vec3> irs_element_positions(const Vec3& origin, const ArrayLayout& layout,
                                        const Orientation& o, Surface s);

/// BS antennas on the plane spanned by m_B^r = (0,1,0) and m_B^c = (-1,0,0).
std::vector<Vec3> bs_antenna_positions(const Vec3& origin, const ArrayLayout& layout);
std::vector<Vec3> bs_antenna_positions(const ScenarioGeometry& g);

/// Q^T (point - frame_origin).
Vec3 local_coordinates(const Vec3& point, const Vec3& frame_origin, const RotationMatrix& q);

/// Incidence/reflection view of one surface: elevation angles against the
/// local z axis and the local z coordinates of source and sink.
struct ReflectionView {
    double incident_angle = 0.0;
    double reflected_angle = 0.0;
    double incident_slack = 0.0;   // z of the source in the surface frame
    double reflected_slack = 0.0;  // z of the sink in the surface frame

    double gain() const;
    bool feasible() const { return incident_slack >= 0.0 && reflected_slack >= 0.0; }
    /// Sum of max(0, -slack) over both endpoints.
    double violation() const;
};

ReflectionView reflection_view(const Vec3& origin, const RotationMatrix& q, const Vec3& source,
                               const Vec3& sink);

struct ElevationAngles {
    double incident1 = 0.0;   // BS seen from IRS 1
    double reflected1 = 0.0;  // IRS 2 seen from IRS 1
    double incident2 = 0.0;   // IRS 1 seen from IRS 2
    double reflected2 = 0.0;  // user seen from IRS 2
};

ElevationAngles elevation_angles(const ScenarioGeometry& g, const Orientation& o1,
                                 const Orientation& o2);

/// cos(phi_i) cos(phi_r).
double aperture_gain(double phi_i, double phi_r);

struct ApertureGains {
    double irs1 = 0.0;
    double irs2 = 0.0;
};

ApertureGains aperture_gains(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2);

/// Local z coordinates: BS and IRS 2 in the IRS-1 frame, IRS 1 and the user in
/// the IRS-2 frame. All nonnegative iff the pair is reflection-feasible.
struct ReflectionSlacks {
    double bs_at_irs1 = 0.0;
    double irs2_at_irs1 = 0.0;
    double irs1_at_irs2 = 0.0;
    double user_at_irs2 = 0.0;

    bool feasible() const;
    double irs1_violation() const;
    double irs2_violation() const;
};

ReflectionSlacks feasibility_slacks(const ScenarioGeometry& g, const Orientation& o1,
                                    const Orientation& o2);

ReflectionView irs1_view(const ScenarioGeometry& g, const Orientation& o1);
ReflectionView irs2_view(const ScenarioGeometry& g, const Orientation& o2);
ReflectionView single_irs_view(const SingleIrsGeometry& g, const Orientation& o);

}  // namespace rotirs
