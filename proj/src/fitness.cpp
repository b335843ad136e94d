#include "ispso/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ispso {

std::strong_ordering compare_solutions(const FitnessValue& a, const FitnessValue& b,
                                       double tie_eps) {
    if (std::abs(a.cv_accuracy - b.cv_accuracy) > tie_eps)
        return a.cv_accuracy < b.cv_accuracy ? std::strong_ordering::less
                                             : std::strong_ordering::greater;
    if (a.n_selected != b.n_selected)
        return a.n_selected > b.n_selected ? std::strong_ordering::less
                                           : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

namespace {

// (distance, train-row index) pairs kept sorted ascending; capacity k.
struct NearestSet {
    std::vector<std::pair<double, std::size_t>> entries;
    std::size_t k;

    explicit NearestSet(std::size_t k_) : k(k_) { entries.reserve(k_ + 1); }

    double worst() const {
        return entries.size() < k ? std::numeric_limits<double>::infinity()
                                  : entries.back().first;
    }

    void offer(double dist, std::size_t idx) {
        if (entries.size() == k && dist > entries.back().first) return;
        auto pos = std::upper_bound(entries.begin(), entries.end(),
                                    std::make_pair(dist, idx));
        entries.insert(pos, {dist, idx});
        if (entries.size() > k) entries.pop_back();
    }
};

int vote(const NearestSet& nearest, const std::vector<int>& labels, std::size_t n_classes) {
    std::vector<std::size_t> counts(n_classes, 0);
    for (const auto& [dist, idx] : nearest.entries) ++counts[labels[idx]];
    std::size_t best = *std::max_element(counts.begin(), counts.end());
    // Among tied classes, the one whose member appears first in the
    // distance-sorted neighbor list wins.
    for (const auto& [dist, idx] : nearest.entries)
        if (counts[labels[idx]] == best) return labels[idx];
    return labels[nearest.entries.front().second];
}

std::vector<double> gather_columns(const Dataset& d, const std::vector<std::size_t>& cols) {
    std::vector<double> out;
    out.reserve(d.n_samples * cols.size());
    for (std::size_t i = 0; i < d.n_samples; ++i)
        for (std::size_t c : cols) out.push_back(d.at(i, c));
    return out;
}

}  // namespace

std::vector<int> knn_predict(const Dataset& train, std::span<const double> queries,
                             const KnnParams& params) {
    if (train.n_samples == 0) throw Error("knn_predict: empty training set");
    if (params.k < 1) throw Error("knn_predict: k must be positive");
    if (params.k > train.n_samples) throw Error("knn_predict: k exceeds training size");
    if (queries.size() % train.n_features != 0)
        throw Error("knn_predict: query width does not match training features");

    const std::size_t nq = queries.size() / train.n_features;
    const std::size_t f = train.n_features;
    std::vector<int> out;
    out.reserve(nq);

    for (std::size_t q = 0; q < nq; ++q) {
        const double* qrow = queries.data() + q * f;
        NearestSet nearest(params.k);
        for (std::size_t j = 0; j < train.n_samples; ++j) {
            const double* trow = train.values.data() + j * f;
            const double cutoff = nearest.worst();
            double s = 0.0;
            for (std::size_t c = 0; c < f; ++c) {
                const double diff = qrow[c] - trow[c];
                s += diff * diff;
                if (s > cutoff) break;
            }
            if (s <= cutoff) nearest.offer(s, j);
        }
        out.push_back(vote(nearest, train.labels, train.n_classes()));
    }
    return out;
}

double cross_validated_predictions(const Dataset& d, const FeatureMask& mask,
                                   const FoldPlan& plan, const KnnParams& params,
                                   std::vector<int>& predictions,
                                   const std::optional<FoldNormalization>& norm) {
    if (!mask.any()) throw Error("cross_validated_accuracy: empty feature mask");
    if (mask.size() != d.n_features)
        throw Error("cross_validated_accuracy: mask length mismatch");
    if (plan.assignment.size() != d.n_samples)
        throw Error("cross_validated_accuracy: fold plan does not cover the dataset");

    const std::vector<std::size_t> cols = mask.selected();
    const std::size_t f = cols.size();
    std::vector<double> proj = gather_columns(d, cols);

    // Per-fold train-side min/max for the leakage-free variant.
    std::vector<double> scale, shift;
    if (norm) {
        scale.assign(plan.k * f, 1.0);
        shift.assign(plan.k * f, 0.0);
        for (std::size_t fold = 0; fold < plan.k; ++fold) {
            for (std::size_t c = 0; c < f; ++c) {
                double mn = std::numeric_limits<double>::infinity();
                double mx = -mn;
                for (std::size_t i = 0; i < d.n_samples; ++i) {
                    if (plan.assignment[i] == fold) continue;
                    mn = std::min(mn, proj[i * f + c]);
                    mx = std::max(mx, proj[i * f + c]);
                }
                const std::size_t at = fold * f + c;
                if (mx > mn) {
                    scale[at] = (norm->upper - norm->lower) / (mx - mn);
                    shift[at] = norm->lower - mn * scale[at];
                } else {
                    scale[at] = 0.0;
                    shift[at] = norm->lower;
                }
            }
        }
    }

    predictions.assign(d.n_samples, -1);
    std::size_t correct = 0;
    std::vector<double> qbuf(f), tbuf(f);

    for (std::size_t i = 0; i < d.n_samples; ++i) {
        const std::size_t fold = plan.assignment[i];
        const double* qsrc = proj.data() + i * f;
        const double* qrow = qsrc;
        if (norm) {
            for (std::size_t c = 0; c < f; ++c)
                qbuf[c] = qsrc[c] * scale[fold * f + c] + shift[fold * f + c];
            qrow = qbuf.data();
        }

        NearestSet nearest(params.k);
        for (std::size_t j = 0; j < d.n_samples; ++j) {
            if (plan.assignment[j] == fold) continue;
            const double* tsrc = proj.data() + j * f;
            const double cutoff = nearest.worst();
            double s = 0.0;
            if (norm) {
                for (std::size_t c = 0; c < f; ++c) {
                    const double tv = tsrc[c] * scale[fold * f + c] + shift[fold * f + c];
                    const double diff = qrow[c] - tv;
                    s += diff * diff;
                    if (s > cutoff) break;
                }
            } else {
                for (std::size_t c = 0; c < f; ++c) {
                    const double diff = qrow[c] - tsrc[c];
                    s += diff * diff;
                    if (s > cutoff) break;
                }
            }
            if (s <= cutoff) nearest.offer(s, j);
        }
        if (nearest.entries.empty())
            throw Error("cross_validated_accuracy: a fold has an empty training complement");
        const int pred = vote(nearest, d.labels, d.n_classes());
        predictions[i] = pred;
        correct += pred == d.labels[i];
    }
    return static_cast<double>(correct) / static_cast<double>(d.n_samples);
}

double cross_validated_accuracy(const Dataset& d, const FeatureMask& mask,
                                const FoldPlan& plan, const KnnParams& params,
                                const std::optional<FoldNormalization>& norm) {
    std::vector<int> predictions;
    return cross_validated_predictions(d, mask, plan, params, predictions, norm);
}

FitnessValue evaluate_fitness(const Dataset& d, const FeatureMask& mask,
                              const FoldPlan& plan, const KnnParams& params,
                              const std::optional<FoldNormalization>& norm) {
    FitnessValue v;
    v.cv_accuracy = cross_validated_accuracy(d, mask, plan, params, norm);
    v.n_selected = mask.count();
    v.eval_cost = d.n_samples;
    return v;
}

FitnessValue FitnessEvaluator::evaluate(const FeatureMask& mask) const {
    const std::string key = mask.to_string();
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const FitnessValue v = evaluate_fitness(dataset_, mask, plan_, params_, norm_);
    std::lock_guard<std::mutex> lock(mutex_);
    ++evaluations_;
    cache_.emplace(key, v);
    return v;
}

std::size_t FitnessEvaluator::cache_size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.size();
}

}  // namespace ispso
