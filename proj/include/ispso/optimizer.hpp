#ifndef ISPSO_OPTIMIZER_HPP
#define ISPSO_OPTIMIZER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ispso/bpso.hpp"
#include "ispso/chaos.hpp"
#include "ispso/core.hpp"
#include "ispso/dataset.hpp"
#include "ispso/fitness.hpp"
#include "ispso/metrics.hpp"
#include "ispso/mutation.hpp"
#include "ispso/seeding.hpp"

namespace ispso {

enum class Variant { ispso_global, plain_bpso };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct AlgorithmConfig {
    Variant variant = Variant::ispso_global;
    PsoParams pso;
    ChaosConfig chaos;
    std::optional<double> chaos_seed;  // unset: derived per run from the run seed
    SeedingParams seeding;
    MutationParams mutation;
    KnnParams knn;
    std::size_t cv_folds = 10;
    bool leakage_free_cv = false;
    double norm_lower = -1.0;
    double norm_upper = 1.0;
    bool enforce_final_budget = false;

    void validate() const;
};

struct RunResult {
    FeatureMask best_mask;
    FitnessValue best_fitness;
    std::vector<FitnessValue> history;  // swarm-best trace, one entry per iteration
    PrfScores scores;                   // pooled out-of-fold metrics of best_mask
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    std::size_t evaluations = 0;        // distinct fitness evaluations performed
};

struct BatchAggregate {
    double mean_accuracy = 0.0;
    double sd_accuracy = 0.0;  // sample SD, n-1 denominator; 0 for a single run
    double mean_subset_size = 0.0;
    double mean_wall_time_s = 0.0;
};

struct BatchResult {
    std::vector<RunResult> runs;
    BatchAggregate aggregate;
};

/// One full optimization on `d` (which is used exactly as given; apply
/// normalize() beforehand if desired). Deterministic given the run seed.
RunResult run_once(const Dataset& d, const AlgorithmConfig& cfg, std::uint64_t seed,
                   const CorrelationProfile* profile = nullptr);

/// n_runs independent runs with seeds base_seed, base_seed+1, ... Runs may
/// execute concurrently on up to `jobs` threads; results and aggregates do
/// not depend on the thread count.
BatchResult run_batch(const Dataset& d, const AlgorithmConfig& cfg, std::size_t n_runs,
                      std::uint64_t base_seed, std::size_t jobs = 1);

}  // namespace ispso

#endif
