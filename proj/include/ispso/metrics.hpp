#ifndef ISPSO_METRICS_HPP
#define ISPSO_METRICS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ispso/core.hpp"

namespace ispso {

/// One-vs-rest confusion counts, one entry per class.
struct ConfusionCounts {
    std::vector<std::size_t> tp, fp, fn, tn;
    std::size_t total = 0;

    std::size_t n_classes() const { return tp.size(); }
};

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

/// Tallies one-vs-rest counts for labels in [0, n_classes).
ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted,
                          std::size_t n_classes);

/// Macro-averaged precision and recall with the zero-denominator convention
/// (a class with no predicted / no actual positives contributes 0), and
/// F = 2PR/(P+R), 0 when both P and R are 0.
PrfScores precision_recall_f(const ConfusionCounts& counts);

/// Fraction of positions where predicted matches truth.
double accuracy(std::span<const int> truth, std::span<const int> predicted);

}  // namespace ispso

#endif
