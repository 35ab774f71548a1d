#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rotirs {

/// Swarm hyperparameters. Coefficient defaults are conventional values, not
/// taken from any reference setup.
struct PsoConfig {
    int swarm_size = 60;
    int max_iters = 40;
    double c1 = 1.49445;
    double c2 = 1.49445;
    double omega_initial = 0.9;
    double omega_final = 0.4;
    double penalty = 1e3;
    std::uint64_t seed = 1;
    /// Stop once the best fitness improves by less than 1e-10 for 15 iterations in a row.
    bool early_stop = false;
    /// Velocity first, then move with the new velocity. False moves with the
    /// previous velocity and updates it afterwards, a one-step lag that
    /// converges markedly slower.
    bool velocity_first = true;

    void validate() const;
};

/// omega(t) = (omega_i - omega_e) (T_max - t) / T_max + omega_e.
double inertia_weight(const PsoConfig& cfg, int t);

struct PsoResult {
    std::vector<double> best_position;
    double best_fitness = 0.0;
    /// Global-best fitness after initialization and after every iteration.
    std::vector<double> trace;
    int iterations = 0;
};

using Fitness = std::function<double(std::span<const double>)>;

/// Maximizes `fitness` over the box [-pi/2, pi/2]^dims. Positions are projected
/// back into the box after every move and velocities are clamped at half the
/// box width. `seeded` particles replace the first random initial positions, so
/// the result is never worse than the best of them.
PsoResult pso_optimize(const Fitness& fitness, int dims, const PsoConfig& cfg,
                       std::span<const std::vector<double>> seeded = {});

}  // namespace rotirs
