#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotirs/beamform.hpp"
#include "rotirs/channel.hpp"
#include "rotirs/geometry.hpp"
#include "rotirs/pso.hpp"

namespace rotirs {

enum class SchemeKind { DoubleRotatable, SingleRotatable, DoubleFixed, SingleFixed };

struct Scheme {
    SchemeKind kind = SchemeKind::DoubleRotatable;
    /// Orientation of every surface for the fixed schemes; also offered to the
    /// rotatable searches as a starting candidate.
    Orientation fixed{-kPi / 4.0, -kPi / 4.0};

    bool is_double() const { return kind == SchemeKind::DoubleRotatable || kind == SchemeKind::DoubleFixed; }
    bool is_rotatable() const { return kind == SchemeKind::DoubleRotatable || kind == SchemeKind::SingleRotatable; }
};

/// "double_rotatable", "single_rotatable", "double_fixed", "single_fixed".
std::string scheme_name(SchemeKind kind);
std::optional<SchemeKind> parse_scheme_name(const std::string& name);

/// The double-IRS link plus the single-IRS comparison link. The single surface
/// has N1 + N2 elements and the IRS-1 element spacing.
struct Scenario {
    ScenarioGeometry dual;
    SingleIrsGeometry single;
};

Scenario make_scenario(const ScenarioGeometry& dual, const Vec3& single_irs_origin);

/// t11 d11 r1 for the double link, t r for the single link.
double distance_product(const ScenarioGeometry& g);
double distance_product(const SingleIrsGeometry& g);

struct SchemeResult {
    Scheme scheme;
    Orientation orient1;
    Orientation orient2;  // unused by single schemes
    BeamformingSolution sol;
    double snr = 0.0;     // linear
    double gain1 = 0.0;
    double gain2 = 0.0;   // NaN for single schemes
    /// True when a fixed orientation puts an endpoint behind a surface; the gain is then reported as 0.
    bool infeasible = false;
    double dist_product = 0.0;
    std::vector<double> objective_trace;
    int outer_iterations = 0;
};

/// Best LoS orientations of both surfaces: two independent 2-D swarms on the
/// penalized aperture gains, seeded with `reference` and, when all anchors lie
/// in z = 0, the closed-form azimuth at zero elevation.
struct OrientationDesign {
    Orientation orient1;
    Orientation orient2;
    double fitness1 = 0.0;
    double fitness2 = 0.0;
};

OrientationDesign los_orientation_design(const ScenarioGeometry& g, const PsoConfig& pso,
                                         const Orientation& reference);

struct SingleOrientationDesign {
    Orientation orient;
    double fitness = 0.0;
};

SingleOrientationDesign los_orientation_design(const SingleIrsGeometry& g, const PsoConfig& pso,
                                               const Orientation& reference);

/// Pure-LoS pipeline: orientation design (rotatable) or the fixed orientation,
/// signature-based closed-form beamformers, closed-form SNR with the achieved gains.
SchemeResult solve_los(const Scenario& scenario, const RicianParams& params, const LinkBudget& budget,
                       const Scheme& scheme, const PsoConfig& pso);

/// Pt beta^3 N1^2 N2^2 M / (sigma^2 t11^2 d11^2 r1^2): both aperture gains at 1.
double upper_bound_snr(const ScenarioGeometry& g, const RicianParams& params, const LinkBudget& budget);

struct AoOptions {
    double convergence_eps = 1e-4;
    int max_outer_iters = 30;
    /// One 4-D swarm over both orientations (default) or two alternating 2-D swarms.
    bool joint_swarm = true;
    /// Draw fresh NLoS samples for every orientation candidate instead of
    /// reusing the trial's frozen draws. Makes the fitness noisy.
    bool redraw_nlos = false;
    ChannelOptions channel;
};

struct AoPsoState {
    Orientation orient1;
    Orientation orient2;
    BeamformingSolution sol;
    /// Objective after the initial beamformer pass, then after every step.
    std::vector<double> objective_trace;
    int iteration = 0;
};

/// AO-PSO for one fading realization (seed `channel_seed`). Each outer iteration:
/// orientation swarm (incumbent injected, fitness penalized by tau * upper_bound_snr
/// so the penalty is commensurate with the SNR), MRT, IRS-1 phases, IRS-2 phases.
/// Starts from the LoS orientation design and one beamformer pass at it.
AoPsoState solve_ao_pso(const ScenarioGeometry& g, const RicianParams& params, const LinkBudget& budget,
                        const PsoConfig& pso, const AoOptions& ao, std::uint64_t channel_seed);

/// Rician solve of any scheme; fixed schemes run the beamformer steps only.
SchemeResult solve_rician(const Scenario& scenario, const RicianParams& params, const LinkBudget& budget,
                          const Scheme& scheme, const PsoConfig& pso, const AoOptions& ao,
                          std::uint64_t channel_seed);

}  // namespace rotirs
