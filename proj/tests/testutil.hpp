#ifndef ISPSO_TESTUTIL_HPP
#define ISPSO_TESTUTIL_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ispso/core.hpp"
#include "ispso/dataset.hpp"
#include "ispso/fitness.hpp"

namespace testutil {

/// Builds an in-memory Dataset from row-major values and integer labels.
inline ispso::Dataset make_dataset(std::vector<double> values, std::vector<int> labels,
                                   std::size_t n_features, std::string name = "synthetic") {
    ispso::Dataset d;
    d.name = std::move(name);
    d.values = std::move(values);
    d.labels = std::move(labels);
    d.n_features = n_features;
    d.n_samples = d.labels.size();
    int max_label = 0;
    for (int l : d.labels) max_label = std::max(max_label, l);
    for (int c = 0; c <= max_label; ++c) d.class_names.push_back("c" + std::to_string(c));
    for (std::size_t j = 0; j < n_features; ++j)
        d.feature_names.push_back("f" + std::to_string(j));
    return d;
}

/// Random dataset with the given shape; every class appears at least once.
inline ispso::Dataset random_dataset(ispso::Rng& rng, std::size_t rows, std::size_t features,
                                     std::size_t classes) {
    std::vector<double> values(rows * features);
    for (double& v : values) v = rng.next_unit() * 10.0 - 5.0;
    std::vector<int> labels(rows);
    for (std::size_t i = 0; i < rows; ++i)
        labels[i] = i < classes ? static_cast<int>(i)
                                : static_cast<int>(rng.next_index(classes));
    return make_dataset(std::move(values), std::move(labels), features);
}

/// Independent nearest-neighbor oracle: exhaustively sorts every
/// (distance, index) pair, takes the first k, and votes with the same tie
/// rules the library documents. Shares no code with knn_predict.
inline std::vector<int> brute_force_knn(const ispso::Dataset& train,
                                        const std::vector<double>& queries, std::size_t k) {
    const std::size_t f = train.n_features;
    const std::size_t nq = queries.size() / f;
    std::vector<int> out;
    for (std::size_t q = 0; q < nq; ++q) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t j = 0; j < train.n_samples; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < f; ++c) {
                const double diff = queries[q * f + c] - train.at(j, c);
                s += diff * diff;
            }
            all.emplace_back(s, j);
        }
        std::sort(all.begin(), all.end());
        all.resize(std::min(k, all.size()));
        std::map<int, std::size_t> counts;
        for (const auto& [dist, idx] : all) ++counts[train.labels[idx]];
        std::size_t best = 0;
        for (const auto& [label, n] : counts) best = std::max(best, n);
        for (const auto& [dist, idx] : all)
            if (counts[train.labels[idx]] == best) {
                out.push_back(train.labels[idx]);
                break;
            }
    }
    return out;
}

/// Brute-force k-fold CV accuracy built on the oracle classifier.
inline double brute_force_cv(const ispso::Dataset& d, const ispso::FeatureMask& mask,
                             const ispso::FoldPlan& plan, std::size_t k) {
    const auto cols = mask.selected();
    std::size_t correct = 0;
    for (std::size_t fold = 0; fold < plan.k; ++fold) {
        ispso::Dataset train;
        train.n_features = cols.size();
        train.class_names = d.class_names;
        std::vector<double> queries;
        std::vector<int> truth;
        for (std::size_t i = 0; i < d.n_samples; ++i) {
            if (plan.assignment[i] == fold) {
                for (std::size_t c : cols) queries.push_back(d.at(i, c));
                truth.push_back(d.labels[i]);
            } else {
                for (std::size_t c : cols) train.values.push_back(d.at(i, c));
                train.labels.push_back(d.labels[i]);
            }
        }
        train.n_samples = train.labels.size();
        const std::vector<int> pred = brute_force_knn(train, queries, k);
        for (std::size_t i = 0; i < truth.size(); ++i) correct += pred[i] == truth[i];
    }
    return static_cast<double>(correct) / static_cast<double>(d.n_samples);
}

}  // namespace testutil

#endif
