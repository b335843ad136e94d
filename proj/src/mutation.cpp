#include "ispso/mutation.hpp"

#include <algorithm>

namespace ispso {

FeatureMask mutate_gbest(const FeatureMask& gbest, const MutationParams& params, Rng& rng) {
    params.validate();
    if (!gbest.any()) throw Error("mutate_gbest: source mask is empty");
    const std::size_t d = gbest.size();

    FeatureMask mutant = gbest;
    if (params.mode == MutationMode::reverse) {
        for (std::size_t j = 0; j < d; ++j) mutant.flip(j);
    } else {
        const double p = params.per_bit_prob.value_or(1.0 / static_cast<double>(d));
        bool flipped = false;
        for (std::size_t j = 0; j < d; ++j) {
            if (rng.next_unit() < p) {
                mutant.flip(j);
                flipped = true;
            }
        }
        if (!flipped) mutant.flip(rng.next_index(d));
    }
    if (!mutant.any()) {
        // The repair bit must not recreate the source, which can only happen
        // when the source has a single set bit. With d == 1 the sole valid
        // mask is the source itself; non-emptiness wins there.
        std::size_t bit = rng.next_index(d);
        if (d > 1 && gbest.count() == 1) {
            while (gbest.test(bit)) bit = rng.next_index(d);
        }
        mutant.set(bit);
    }
    return mutant;
}

void replace_gworst(SwarmState& swarm, const FeatureMask& mutant,
                    const FitnessValue& mutant_fitness,
                    const std::vector<FitnessValue>& current_fitnesses, double tie_eps) {
    if (swarm.size() == 0) throw Error("replace_gworst: empty swarm");
    if (current_fitnesses.size() != swarm.size())
        throw Error("replace_gworst: one fitness per particle required");

    std::size_t worst = 0;
    for (std::size_t i = 1; i < swarm.size(); ++i)
        if (is_better(current_fitnesses[worst], current_fitnesses[i], tie_eps)) worst = i;

    ParticleState& p = swarm.particles[worst];
    p.position = mutant;
    std::fill(p.velocity.begin(), p.velocity.end(), 0.0);
    if (is_better(mutant_fitness, p.pbest_fitness, tie_eps)) {
        p.pbest_fitness = mutant_fitness;
        p.pbest_position = mutant;
        if (is_better(p.pbest_fitness, swarm.gbest_fitness, tie_eps)) {
            swarm.gbest_fitness = p.pbest_fitness;
            swarm.gbest_position = p.pbest_position;
        }
    }
}

}  // namespace ispso
