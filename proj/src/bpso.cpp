#include "ispso/bpso.hpp"

#include <algorithm>
#include <cmath>

namespace ispso {

std::size_t SwarmState::gbest_holder(double tie_eps) const {
    for (std::size_t i = 0; i < particles.size(); ++i)
        if (compare_solutions(particles[i].pbest_fitness, gbest_fitness, tie_eps) ==
            std::strong_ordering::equal &&
            particles[i].pbest_position == gbest_position)
            return i;
    return 0;
}

std::vector<double> update_velocity(const ParticleState& p, const FeatureMask& gbest,
                                    const PsoParams& params, std::span<const double> draws) {
    const std::size_t d = p.velocity.size();
    if (p.position.size() != d || p.pbest_position.size() != d || gbest.size() != d)
        throw Error("update_velocity: vector length mismatch");
    if (draws.size() != 2 * d) throw Error("update_velocity: need two draws per dimension");

    std::vector<double> v(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double x = p.position.test(j) ? 1.0 : 0.0;
        const double pb = p.pbest_position.test(j) ? 1.0 : 0.0;
        const double gb = gbest.test(j) ? 1.0 : 0.0;
        const double r1 = draws[2 * j];
        const double r2 = draws[2 * j + 1];
        const double raw = p.velocity[j] + params.c1 * r1 * (pb - x) + params.c2 * r2 * (gb - x);
        v[j] = std::clamp(raw, -params.vmax, params.vmax);
    }
    return v;
}

std::vector<double> update_velocity(const ParticleState& p, const FeatureMask& gbest,
                                    const PsoParams& params, Rng& rng) {
    std::vector<double> draws(2 * p.velocity.size());
    for (double& r : draws) r = rng.next_unit();
    return update_velocity(p, gbest, params, draws);
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

FeatureMask update_position(const std::vector<double>& velocity, std::span<const double> draws,
                            std::size_t repair_index) {
    if (draws.size() != velocity.size())
        throw Error("update_position: need one draw per dimension");
    FeatureMask mask(velocity.size());
    for (std::size_t j = 0; j < velocity.size(); ++j)
        mask.set(j, draws[j] < sigmoid(velocity[j]));
    if (!mask.any()) mask.set(repair_index);
    return mask;
}

FeatureMask update_position(const std::vector<double>& velocity, Rng& rng) {
    std::vector<double> draws(velocity.size());
    for (double& r : draws) r = rng.next_unit();
    FeatureMask mask(velocity.size());
    for (std::size_t j = 0; j < velocity.size(); ++j)
        mask.set(j, draws[j] < sigmoid(velocity[j]));
    if (!mask.any()) mask.set(rng.next_index(velocity.size()));
    return mask;
}

void update_bests(SwarmState& swarm, const std::vector<FitnessValue>& fitnesses,
                  double tie_eps) {
    if (fitnesses.size() != swarm.particles.size())
        throw Error("update_bests: one fitness per particle required");

    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        ParticleState& p = swarm.particles[i];
        if (is_better(fitnesses[i], p.pbest_fitness, tie_eps)) {
            p.pbest_fitness = fitnesses[i];
            p.pbest_position = p.position;
        }
    }
    for (const ParticleState& p : swarm.particles) {
        if (is_better(p.pbest_fitness, swarm.gbest_fitness, tie_eps)) {
            swarm.gbest_fitness = p.pbest_fitness;
            swarm.gbest_position = p.pbest_position;
        }
    }
}

}  // namespace ispso
