#ifndef ISPSO_DATASET_HPP
#define ISPSO_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ispso/core.hpp"

namespace ispso {

/// Labeled tabular data: row-major real-valued features plus one class id
/// per row. Immutable after construction; safe to share across threads.
struct Dataset {
    std::string name;
    std::vector<std::string> feature_names;
    std::vector<double> values;  // row-major, n_samples x n_features
    std::vector<int> labels;     // class ids, 0-based
    std::vector<std::string> class_names;
    std::size_t n_features = 0;
    std::size_t n_samples = 0;

    std::size_t n_classes() const { return class_names.size(); }
    double at(std::size_t row, std::size_t col) const { return values[row * n_features + col]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * n_features, n_features};
    }
};

/// Assignment of every row to one of k cross-validation folds.
struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;  // per-row fold index in [0, k)
};

/// Reads a delimited text file (comma or tab, auto-detected) with one header
/// row. `label_column` selects the class column by header name, or, when no
/// header matches and the string is a non-negative integer, by 0-based index.
/// Feature cells must be numeric; missing or non-numeric cells are reported
/// with row/column coordinates.
Dataset load_dataset(const std::string& path, const std::string& label_column);

/// Per-feature linear rescale of every value into [lower, upper]. Constant
/// features map to `lower`. Labels untouched.
Dataset normalize(const Dataset& d, double lower, double upper);

/// Stratified k-fold assignment: folds partition the rows, fold sizes differ
/// by at most one, and per-class counts across folds differ by at most one.
/// Deterministic given the seed.
FoldPlan stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed);

/// Dataset restricted to the masked columns; rows, labels, and relative
/// feature order preserved.
Dataset project(const Dataset& d, const FeatureMask& mask);

}  // namespace ispso

#endif
