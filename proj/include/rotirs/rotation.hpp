#pragma once

#include "rotirs/beamform.hpp"
#include "rotirs/channel.hpp"
#include "rotirs/geometry.hpp"

namespace rotirs {

/// Azimuth maximizing cos(phi_i) cos(phi_r) at zero elevation for a surface at
/// `origin` serving `source` -> `sink`, all three in the z = 0 plane (checked to
/// 1e-12, DegenerateGeometryError otherwise).
///
/// With phi = 0 the normal is horizontal and the gain is
/// (cos(a - b) + cos(2 alpha - a - b)) / 2 for normal angle alpha and endpoint
/// bearings a, b, so the optimum is the bisector of the two bearings whenever
/// it is reachable, and otherwise the reachable azimuth closest to it. IRS 1's
/// normal bearing is +theta and IRS 2's is -theta. Throws
/// DegenerateGeometryError when no azimuth in [-pi/2, pi/2] keeps both endpoints
/// on the reflective side.
double closed_form_azimuth(const Vec3& origin, const Vec3& source, const Vec3& sink, Surface s);

double closed_form_azimuth_irs1(const ScenarioGeometry& g);
double closed_form_azimuth_irs2(const ScenarioGeometry& g);
double closed_form_azimuth_single(const SingleIrsGeometry& g);

/// F - tau * violation for IRS 1 (BS and IRS 2 slacks).
double penalized_fitness_los_irs1(const ScenarioGeometry& g, const Orientation& o1, double tau);
/// F - tau * violation for IRS 2 (IRS 1 and user slacks).
double penalized_fitness_los_irs2(const ScenarioGeometry& g, const Orientation& o2, double tau);
double penalized_fitness_los_single(const SingleIrsGeometry& g, const Orientation& o, double tau);

/// snr(...) - tau * (IRS-1 violation [+ IRS-2 violation when include_irs2]).
/// The aperture gains are evaluated at (o1, o2); `channels` must have been
/// realized for the same pair.
double penalized_fitness_rician(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2,
                                const ChannelSet& channels, const BeamformingSolution& sol,
                                const LinkBudget& budget, double tau, bool include_irs2 = true);

}  // namespace rotirs
