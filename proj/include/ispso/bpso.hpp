#ifndef ISPSO_BPSO_HPP
#define ISPSO_BPSO_HPP

#include <cstddef>
#include <vector>

#include "ispso/core.hpp"
#include "ispso/fitness.hpp"

namespace ispso {

struct PsoParams {
    double c1 = 1.5;
    double c2 = 2.0;
    double vmax = 4.0;
    std::size_t n_particles = 30;
    std::size_t max_iterations = 100;

    void validate() const {
        if (c1 <= 0.0 || c2 <= 0.0) throw Error("pso.c1 and pso.c2 must be positive");
        if (vmax <= 0.0) throw Error("pso.vmax must be positive");
        if (n_particles < 2) throw Error("pso.particles must be at least 2");
    }
};

struct ParticleState {
    FeatureMask position;
    std::vector<double> velocity;
    FeatureMask pbest_position;
    FitnessValue pbest_fitness = FitnessValue::worst();
};

struct SwarmState {
    std::vector<ParticleState> particles;
    FeatureMask gbest_position;
    FitnessValue gbest_fitness = FitnessValue::worst();
    std::size_t iteration = 0;

    std::size_t size() const { return particles.size(); }

    /// Index of the first particle whose personal best equals the swarm best.
    std::size_t gbest_holder(double tie_eps) const;
};

/// One velocity update: v' = v + c1*r1*(pbest - x) + c2*r2*(gbest - x),
/// clamped to [-vmax, vmax]. `draws` supplies r1,r2 per dimension
/// (dimension-minor order: r1_0, r2_0, r1_1, r2_1, ...), so the update is a
/// pure function of its inputs.
std::vector<double> update_velocity(const ParticleState& p, const FeatureMask& gbest,
                                    const PsoParams& params, std::span<const double> draws);

/// As above with fresh uniform draws from `rng`.
std::vector<double> update_velocity(const ParticleState& p, const FeatureMask& gbest,
                                    const PsoParams& params, Rng& rng);

/// Logistic transfer 1 / (1 + e^-v).
double sigmoid(double v);

/// Samples a position: bit j is 1 iff draws[j] < sigmoid(v_j). When every
/// bit lands 0, bit `repair_index` is forced on.
FeatureMask update_position(const std::vector<double>& velocity, std::span<const double> draws,
                            std::size_t repair_index);

/// As above with fresh uniform draws; the repair bit is chosen uniformly.
FeatureMask update_position(const std::vector<double>& velocity, Rng& rng);

/// Replaces each personal best that is strictly beaten by the particle's new
/// fitness, then lifts the best personal best into the swarm best. Ties keep
/// the incumbent.
void update_bests(SwarmState& swarm, const std::vector<FitnessValue>& fitnesses,
                  double tie_eps);

}  // namespace ispso

#endif
