#ifndef ISPSO_FITNESS_HPP
#define ISPSO_FITNESS_HPP

#include <compare>
#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ispso/core.hpp"
#include "ispso/dataset.hpp"

namespace ispso {

/// Cross-validated accuracy paired with subset size for lexicographic
/// comparison: higher accuracy wins; near-ties go to the smaller subset.
struct FitnessValue {
    double cv_accuracy = 0.0;
    std::size_t n_selected = 0;
    std::size_t eval_cost = 0;  // classifier invocations, bookkeeping only

    /// Sentinel that loses to every real evaluation.
    static FitnessValue worst() { return {-1.0, static_cast<std::size_t>(-1), 0}; }

    bool operator==(const FitnessValue& o) const {
        return cv_accuracy == o.cv_accuracy && n_selected == o.n_selected;
    }
};

struct KnnParams {
    std::size_t k = 1;
    double tie_eps = 1e-9;  // accuracy difference treated as "almost the same"
};

/// Greater means `a` is the better solution.
std::strong_ordering compare_solutions(const FitnessValue& a, const FitnessValue& b,
                                       double tie_eps);

inline bool is_better(const FitnessValue& a, const FitnessValue& b, double tie_eps) {
    return compare_solutions(a, b, tie_eps) == std::strong_ordering::greater;
}

/// Majority vote among the k nearest training rows by Euclidean distance.
/// Distance ties resolve to the lower training-row index; vote ties resolve
/// to the tied class seen nearest. `queries` is row-major with
/// train.n_features columns.
std::vector<int> knn_predict(const Dataset& train, std::span<const double> queries,
                             const KnnParams& params);

/// Rescales each fold's training and validation values with statistics
/// computed on the training complement only (leakage-free evaluation).
struct FoldNormalization {
    double lower = -1.0;
    double upper = 1.0;
};

/// Rotating k-fold accuracy of a kNN classifier restricted to the masked
/// features. Deterministic; no randomness beyond the fold plan.
double cross_validated_accuracy(const Dataset& d, const FeatureMask& mask,
                                const FoldPlan& plan, const KnnParams& params,
                                const std::optional<FoldNormalization>& norm = std::nullopt);

/// As above, but also returns the pooled out-of-fold predictions.
double cross_validated_predictions(const Dataset& d, const FeatureMask& mask,
                                   const FoldPlan& plan, const KnnParams& params,
                                   std::vector<int>& predictions,
                                   const std::optional<FoldNormalization>& norm = std::nullopt);

FitnessValue evaluate_fitness(const Dataset& d, const FeatureMask& mask,
                              const FoldPlan& plan, const KnnParams& params,
                              const std::optional<FoldNormalization>& norm = std::nullopt);

/// Memoizing wrapper around evaluate_fitness for one (dataset, plan, params)
/// triple. The cache is guarded so concurrent evaluators may share it; hits
/// return bit-identical values.
class FitnessEvaluator {
public:
    FitnessEvaluator(const Dataset& d, FoldPlan plan, KnnParams params,
                     std::optional<FoldNormalization> norm = std::nullopt)
        : dataset_(d), plan_(std::move(plan)), params_(params), norm_(norm) {}

    FitnessValue evaluate(const FeatureMask& mask) const;

    const Dataset& dataset() const { return dataset_; }
    const FoldPlan& plan() const { return plan_; }
    const KnnParams& params() const { return params_; }
    std::size_t cache_size() const;
    std::size_t evaluations() const { return evaluations_; }

private:
    const Dataset& dataset_;
    FoldPlan plan_;
    KnnParams params_;
    std::optional<FoldNormalization> norm_;
    mutable std::unordered_map<std::string, FitnessValue> cache_;
    mutable std::mutex mutex_;
    mutable std::size_t evaluations_ = 0;
};

}  // namespace ispso

#endif
