#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rotirs/config.hpp"

namespace rotirs {

/// One (scheme, sweep value) point averaged over the trials. Angles in radians;
/// fields that do not apply to a scheme are NaN.
struct ResultRow {
    std::string scheme;
    std::string sweep_axis;
    double sweep_value = 0.0;
    double snr_db_mean = 0.0;
    double snr_db_std = 0.0;  // sample standard deviation, 0 for a single trial
    int trials = 0;
    std::uint64_t seed = 0;
    double gain1 = 0.0;
    double gain2 = 0.0;
    double theta1 = 0.0;
    double phi1 = 0.0;
    double theta2 = 0.0;
    double phi2 = 0.0;
    double dist_product = 0.0;
};

/// Rows ordered by sweep value, then by the spec's scheme order. Trial t of
/// every scheme and sweep value shares the channel seed derive_seed(seed, t),
/// so scheme comparisons use common random numbers. Pure-LoS runs take the
/// closed-form pipeline; anything with a finite Rician factor runs AO-PSO.
/// Throws ConfigError for an odd element count with a double scheme and
/// NumericalError when a trial's SNR is not positive and finite.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "scheme,sweep_axis,sweep_value,snr_db_mean,snr_db_std,trials,seed,gain1,gain2,theta1,phi1,theta2,phi2,dist_product";

/// Header plus one line per row; reals with 6 significant digits, angles in
/// degrees, NaN fields left empty, LF line endings.
void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out);
/// Throws std::runtime_error when the destination cannot be written.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace rotirs
