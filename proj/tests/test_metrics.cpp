#include <vector>

#include "doctest.h"
#include "ispso/metrics.hpp"

using namespace ispso;

TEST_CASE("confusion hand-counted example") {
    // truth [A,A,B], predicted [A,B,B]
    const std::vector<int> truth = {0, 0, 1};
    const std::vector<int> pred = {0, 1, 1};
    const ConfusionCounts c = confusion(truth, pred, 2);
    CHECK(c.tp[0] == 1);
    CHECK(c.fn[0] == 1);
    CHECK(c.fp[0] == 0);
    CHECK(c.tn[0] == 1);
    CHECK(c.tp[1] == 1);
    CHECK(c.fp[1] == 1);
}

TEST_CASE("confusion perfect and inverted predictions") {
    const std::vector<int> truth = {0, 1, 0, 1};
    const ConfusionCounts perfect = confusion(truth, truth, 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(perfect.fp[k] == 0);
        CHECK(perfect.fn[k] == 0);
    }

    const std::vector<int> flipped = {1, 0, 1, 0};
    const ConfusionCounts wrong = confusion(truth, flipped, 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(wrong.tp[k] == 0);
        CHECK(wrong.tn[k] == 0);
    }
}

TEST_CASE("confusion invariants and errors") {
    const std::vector<int> truth = {0, 2, 1, 1};
    const std::vector<int> pred = {0, 1, 1, 2};
    const ConfusionCounts c = confusion(truth, pred, 3);
    std::size_t tp_sum = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(c.tp[k] + c.fp[k] + c.fn[k] + c.tn[k] == c.total);
        tp_sum += c.tp[k];
    }
    CHECK(tp_sum == 2);  // two correct predictions

    const std::vector<int> shorter = {0};
    CHECK_THROWS_AS(confusion(truth, shorter, 3), Error);
    const std::vector<int> alien = {0, 1, 1, 7};
    CHECK_THROWS_AS(confusion(truth, alien, 3), Error);
}

TEST_CASE("precision_recall_f hand example and boundaries") {
    // Positive class: TP=2, FP=1, FN=2; negative class: TP=1, FP=2, FN=1.
    ConfusionCounts c;
    c.tp = {2, 1};
    c.fp = {1, 2};
    c.fn = {2, 1};
    c.tn = {1, 2};
    c.total = 6;
    const PrfScores s = precision_recall_f(c);
    CHECK(s.precision == doctest::Approx(0.5).epsilon(1e-9));

    const std::vector<int> truth = {0, 1, 1, 0};
    const PrfScores perfect = precision_recall_f(confusion(truth, truth, 2));
    CHECK(perfect.precision == doctest::Approx(1.0));
    CHECK(perfect.recall == doctest::Approx(1.0));
    CHECK(perfect.f_measure == doctest::Approx(1.0));

    const std::vector<int> flipped = {1, 0, 0, 1};
    const PrfScores zero = precision_recall_f(confusion(truth, flipped, 2));
    CHECK(zero.precision == 0.0);
    CHECK(zero.recall == 0.0);
    CHECK(zero.f_measure == 0.0);
}

TEST_CASE("F lies between min and max of P and R over random tables") {
    Rng rng(21);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t classes = 2 + rng.next_index(4);
        const std::size_t n = 5 + rng.next_index(40);
        std::vector<int> truth(n), pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = static_cast<int>(rng.next_index(classes));
            pred[i] = static_cast<int>(rng.next_index(classes));
        }
        const PrfScores s = precision_recall_f(confusion(truth, pred, classes));
        CHECK(s.precision >= 0.0);
        CHECK(s.precision <= 1.0);
        CHECK(s.recall >= 0.0);
        CHECK(s.recall <= 1.0);
        const double lo = std::min(s.precision, s.recall);
        const double hi = std::max(s.precision, s.recall);
        CHECK(s.f_measure >= lo - 1e-12);
        CHECK(s.f_measure <= hi + 1e-12);

        // accuracy equals sum of TP over total
        const ConfusionCounts c = confusion(truth, pred, classes);
        std::size_t tp_sum = 0;
        for (std::size_t k = 0; k < classes; ++k) tp_sum += c.tp[k];
        CHECK(accuracy(truth, pred) ==
              doctest::Approx(static_cast<double>(tp_sum) / static_cast<double>(n)));
    }
}

TEST_CASE("accuracy basics") {
    const std::vector<int> t = {0, 1, 1, 0};
    CHECK(accuracy(t, t) == 1.0);
    const std::vector<int> w = {1, 0, 0, 1};
    CHECK(accuracy(t, w) == 0.0);
    const std::vector<int> p = {0, 1, 1, 1};
    CHECK(accuracy(t, p) == doctest::Approx(0.75));
    const std::vector<int> empty;
    CHECK_THROWS_AS(accuracy(empty, empty), Error);
}
