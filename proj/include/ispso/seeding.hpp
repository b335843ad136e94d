#ifndef ISPSO_SEEDING_HPP
#define ISPSO_SEEDING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ispso/bpso.hpp"
#include "ispso/core.hpp"
#include "ispso/dataset.hpp"

namespace ispso {

/// Per-feature vote counts accumulated from the fittest particles at
/// recorded iterations.
struct StorageList {
    std::vector<std::uint64_t> votes;
    std::vector<std::size_t> recorded_iterations;
    double top_fraction = 0.2;

    explicit StorageList(std::size_t n_features = 0, double top_fraction_ = 0.2)
        : votes(n_features, 0), top_fraction(top_fraction_) {}
};

struct SeedingParams {
    double r = 1.0;                       // in [1, 50]
    double v = 0.5;                       // in [0, 1]
    std::optional<double> temperature;    // unset: max(1, max_vote/3) per event
    std::size_t record_every = 5;
    double top_fraction = 0.2;
    double seed_fraction = 0.25;
    bool invert_sign = false;             // literal e^(-votes/T) weighting

    void validate() const {
        if (r < 1.0 || r > 50.0) throw Error("seeding.r must lie in [1,50]");
        if (v < 0.0 || v > 1.0) throw Error("seeding.v must lie in [0,1]");
        if (temperature && *temperature <= 0.0) throw Error("seeding.temperature must be positive");
        if (record_every < 1) throw Error("seeding.record_every must be at least 1");
        if (top_fraction <= 0.0 || top_fraction > 1.0)
            throw Error("seeding.top_fraction must lie in (0,1]");
        if (seed_fraction < 0.0 || seed_fraction > 1.0)
            throw Error("seeding.seed_fraction must lie in [0,1]");
    }
};

/// Pairwise Pearson coefficients between features, computed once per dataset.
class CorrelationProfile {
public:
    CorrelationProfile() = default;
    static CorrelationProfile from_dataset(const Dataset& d);

    std::size_t n_features() const { return n_; }
    double coefficient(std::size_t i, std::size_t j) const { return c_[i * n_ + j]; }

    /// Mean |c_ij| between feature i and the other masked features (Eq.-style
    /// redundancy score; the self term is excluded).
    double mean_abs_correlation(std::size_t i, const FeatureMask& mask) const;

private:
    std::size_t n_ = 0;
    std::vector<double> c_;
};

/// Target subset size K from dataset shape and the user parameters v, r:
/// ceil(((N - v*N) + CR) / (CR - r)), clamped to [1, N].
std::size_t feature_budget(std::size_t n_features, std::size_t n_samples, double v, double r);

/// Sample Pearson correlation coefficient; 0 when either input is constant.
double pearson(std::span<const double> xi, std::span<const double> xj);

/// Folds one iteration's fittest particles into the vote counts: every set
/// bit of each of the ceil(top_fraction * n) fittest positions adds one vote.
void record_votes(StorageList& list, const SwarmState& swarm,
                  const std::vector<FitnessValue>& fitnesses, std::size_t iteration,
                  std::size_t record_every, double tie_eps);

/// Selection probabilities p_i proportional to e^(votes_i / T) (or
/// e^(-votes_i / T) when inverted), computed with a max-shift so large vote
/// counts cannot overflow.
std::vector<double> boltzmann_probs(std::span<const std::uint64_t> votes, double temperature,
                                    bool invert_sign = false);

/// The add operation: draws K distinct features without replacement,
/// proportionally to their Boltzmann weights, renormalizing after each draw.
FeatureMask seed_particle(const StorageList& list, std::size_t K,
                          const CorrelationProfile& profile, double temperature,
                          bool invert_sign, Rng& rng);

/// The delete operation: repeatedly removes the masked feature with the
/// highest mean absolute correlation until K bits remain. Ties go to the
/// lower vote count, then the lower index.
FeatureMask prune_particle(const FeatureMask& mask, const CorrelationProfile& profile,
                           std::size_t K, std::span<const std::uint64_t> votes);

/// Replaces the positions of the floor(seed_fraction * n) currently worst
/// particles (never the swarm-best holder) with freshly seeded K-feature
/// masks; their velocities reset to zero, personal bests kept. Returns the
/// indices of the reseeded particles.
std::vector<std::size_t> apply_seeding(SwarmState& swarm, const StorageList& list,
                                       const SeedingParams& params, std::size_t K,
                                       const CorrelationProfile& profile,
                                       const std::vector<FitnessValue>& fitnesses,
                                       double tie_eps, Rng& rng);

}  // namespace ispso

#endif
