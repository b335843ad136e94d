#include "ispso/metrics.hpp"

#include <string>

namespace ispso {

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted,
                          std::size_t n_classes) {
    if (truth.size() != predicted.size())
        throw Error("confusion: truth and predicted lengths differ");
    ConfusionCounts c;
    c.tp.assign(n_classes, 0);
    c.fp.assign(n_classes, 0);
    c.fn.assign(n_classes, 0);
    c.tn.assign(n_classes, 0);
    c.total = truth.size();

    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i], p = predicted[i];
        if (t < 0 || p < 0 || t >= static_cast<int>(n_classes) || p >= static_cast<int>(n_classes))
            throw Error("confusion: label outside class set at position " + std::to_string(i));
        for (std::size_t k = 0; k < n_classes; ++k) {
            const bool is_t = t == static_cast<int>(k);
            const bool is_p = p == static_cast<int>(k);
            if (is_t && is_p) ++c.tp[k];
            else if (!is_t && is_p) ++c.fp[k];
            else if (is_t && !is_p) ++c.fn[k];
            else ++c.tn[k];
        }
    }
    return c;
}

PrfScores precision_recall_f(const ConfusionCounts& counts) {
    const std::size_t m = counts.n_classes();
    if (m == 0) throw Error("precision_recall_f: empty confusion table");

    double psum = 0.0, rsum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double pd = static_cast<double>(counts.tp[k] + counts.fp[k]);
        const double rd = static_cast<double>(counts.tp[k] + counts.fn[k]);
        if (pd > 0.0) psum += counts.tp[k] / pd;
        if (rd > 0.0) rsum += counts.tp[k] / rd;
    }

    PrfScores s;
    s.precision = psum / static_cast<double>(m);
    s.recall = rsum / static_cast<double>(m);
    s.f_measure = (s.precision + s.recall) > 0.0
                      ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                      : 0.0;
    return s;
}

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.empty()) throw Error("accuracy: empty input");
    if (truth.size() != predicted.size())
        throw Error("accuracy: truth and predicted lengths differ");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += truth[i] == predicted[i];
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

}  // namespace ispso
