#ifndef ISPSO_MUTATION_HPP
#define ISPSO_MUTATION_HPP

#include <cstddef>
#include <optional>

#include "ispso/bpso.hpp"
#include "ispso/core.hpp"

namespace ispso {

enum class MutationMode { flip, reverse };

struct MutationParams {
    double trigger_prob = 0.5;                 // chance an event fires each iteration
    std::optional<double> per_bit_prob;        // unset: 1 / n_features
    MutationMode mode = MutationMode::flip;

    void validate() const {
        if (trigger_prob < 0.0 || trigger_prob > 1.0)
            throw Error("mutation.trigger_prob must lie in [0,1]");
        if (per_bit_prob && (*per_bit_prob <= 0.0 || *per_bit_prob > 1.0))
            throw Error("mutation.per_bit_prob must lie in (0,1]");
    }
};

/// Copy of the swarm best with each bit independently flipped with
/// probability per_bit_prob (default 1/d). When no bit flips, one uniformly
/// chosen bit is forced, so the mutant always differs from its source. In
/// reverse mode the mutant is the bitwise complement. All-zero results get
/// one random bit set.
FeatureMask mutate_gbest(const FeatureMask& gbest, const MutationParams& params, Rng& rng);

/// Hands the evaluated mutant to the particle with the worst current fitness
/// (ties: lowest index): position := mutant, velocity := 0, and its personal
/// best updates only if the mutant beats it. The swarm best improves through
/// the same rule; it is never degraded.
void replace_gworst(SwarmState& swarm, const FeatureMask& mutant,
                    const FitnessValue& mutant_fitness,
                    const std::vector<FitnessValue>& current_fitnesses, double tie_eps);

}  // namespace ispso

#endif
