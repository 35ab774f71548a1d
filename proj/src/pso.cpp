#include "rotirs/pso.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rotirs/rng.hpp"
#include "rotirs/types.hpp"

namespace rotirs {

namespace {

constexpr double kLo = -kHalfPi;
constexpr double kHi = kHalfPi;
constexpr double kWidth = kHi - kLo;
constexpr double kMaxSpeed = 0.5 * kWidth;
constexpr double kStallTolerance = 1e-10;
constexpr int kStallIterations = 15;

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_fitness = -std::numeric_limits<double>::infinity();
};

}  // namespace

void PsoConfig::validate() const {
    if (swarm_size < 2) throw DomainError("PSO swarm size must be at least 2");
    if (max_iters < 1) throw DomainError("PSO max_iters must be at least 1");
    if (!(penalty > 0.0)) throw DomainError("PSO penalty tau must be positive");
    if (c1 < 0.0 || c2 < 0.0) throw DomainError("PSO coefficients c1, c2 must be nonnegative");
    if (!(omega_initial >= omega_final && omega_final >= 0.0)) {
        throw DomainError("PSO inertia weights must satisfy omega_initial >= omega_final >= 0");
    }
}

double inertia_weight(const PsoConfig& cfg, int t) {
    return (cfg.omega_initial - cfg.omega_final) * (cfg.max_iters - t) / cfg.max_iters + cfg.omega_final;
}

PsoResult pso_optimize(const Fitness& fitness, int dims, const PsoConfig& cfg,
                       std::span<const std::vector<double>> seeded) {
    cfg.validate();
    if (dims < 1) throw DomainError("PSO dimension must be positive");
    Rng rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto udim = static_cast<size_t>(dims);

    std::vector<Particle> swarm(static_cast<size_t>(cfg.swarm_size));
    for (size_t b = 0; b < swarm.size(); ++b) {
        Particle& p = swarm[b];
        p.position.resize(udim);
        p.velocity.resize(udim);
        for (size_t d = 0; d < udim; ++d) {
            p.position[d] = kLo + kWidth * unit(rng);
            p.velocity[d] = (unit(rng) - 0.5) * 0.2 * kWidth;
        }
        if (b < seeded.size()) {
            if (seeded[b].size() != udim) throw DimensionError("seeded particle has the wrong dimension");
            for (size_t d = 0; d < udim; ++d) p.position[d] = std::clamp(seeded[b][d], kLo, kHi);
        }
    }

    PsoResult result;
    result.best_fitness = -std::numeric_limits<double>::infinity();
    auto evaluate_all = [&] {
        for (Particle& p : swarm) {
            const double value = fitness(p.position);
            if (value > p.best_fitness) {
                p.best_fitness = value;
                p.best_position = p.position;
            }
        }
        // Strict improvement in swarm order keeps the reduction deterministic.
        for (const Particle& p : swarm) {
            if (p.best_fitness > result.best_fitness) {
                result.best_fitness = p.best_fitness;
                result.best_position = p.best_position;
            }
        }
        result.trace.push_back(result.best_fitness);
    };
    evaluate_all();
    if (result.best_position.empty()) result.best_position = swarm.front().position;

    int stall = 0;
    for (int t = 0; t < cfg.max_iters; ++t) {
        const double omega = inertia_weight(cfg, t);
        for (Particle& p : swarm) {
            for (size_t d = 0; d < udim; ++d) {
                const double x = p.position[d];
                const double v = p.velocity[d];
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                const double nv = std::clamp(omega * v + cfg.c1 * r1 * (p.best_position[d] - x) +
                                                 cfg.c2 * r2 * (result.best_position[d] - x),
                                             -kMaxSpeed, kMaxSpeed);
                p.position[d] = std::clamp(x + (cfg.velocity_first ? nv : v), kLo, kHi);
                p.velocity[d] = nv;
            }
        }
        const double before = result.best_fitness;
        evaluate_all();
        ++result.iterations;
        if (cfg.early_stop) {
            stall = (result.best_fitness - before < kStallTolerance) ? stall + 1 : 0;
            if (stall >= kStallIterations) break;
        }
    }
    return result;
}

}  // namespace rotirs
