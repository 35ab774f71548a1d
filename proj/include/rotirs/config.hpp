#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotirs/channel.hpp"
#include "rotirs/geometry.hpp"
#include "rotirs/pso.hpp"
#include "rotirs/solver.hpp"

namespace rotirs {

enum class SweepAxis { ElementCount, TxPowerDbm, RicianFactorDb };

std::string sweep_axis_name(SweepAxis axis);

/// Everything one CLI run needs, in internal units (meters, watts, radians,
/// linear factors).
struct ExperimentSpec {
    Vec3 bs_position{-7.0, -15.0, 0.0};
    Vec3 irs1_position{0.0, 25.0, 5.0};
    Vec3 irs2_position{5.0, -20.0, 10.0};
    Vec3 user_position{15.0, 20.0, 0.0};
    Vec3 single_irs_position{0.0, 25.0, 5.0};
    double carrier_frequency_hz = 2.4e9;
    int bs_antennas = 64;
    int irs1_elements = 256;
    int irs2_elements = 256;
    double element_spacing_wavelengths = 0.5;
    double antenna_spacing_wavelengths = 0.5;
    double beta = 1e-4;
    double noise_power = 1e-11;
    double pt = 1.0;
    double kappa = kPureLos;

    SweepAxis axis = SweepAxis::ElementCount;
    std::vector<double> values{512.0};
    std::vector<Scheme> schemes;
    int trials = 1;
    std::uint64_t seed = 1;
    /// 0 picks the hardware concurrency.
    int threads = 0;

    PsoConfig pso;
    AoOptions ao;

    double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Defaults of the reference scenario: all four schemes, fixed surfaces at (-45, -45) degrees.
ExperimentSpec default_spec();

/// JSON document -> spec. Positions are 3-number arrays in meters, angles in
/// degrees, powers in dBm, beta and kappa in dB ("inf" for pure LoS). Unknown
/// keys are rejected. Throws ConfigError.
ExperimentSpec parse_config(const std::string& text);
ExperimentSpec load_config(const std::string& path);

/// "desk": M = 8, N1 = N2 = 32, B = 60, T_max = 40, 50 trials.
/// "paper": M = 64, N1 = N2 = 256, B = 800, T_max = 50.
void apply_preset(ExperimentSpec& spec, const std::string& name);

/// Geometry at the base element counts (the element-count sweep overrides them).
ScenarioGeometry build_geometry(const ExperimentSpec& spec, int irs1_elements, int irs2_elements,
                                int bs_antennas);

}  // namespace rotirs
