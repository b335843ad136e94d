#include <vector>

#include "doctest.h"
#include "ispso/dataset.hpp"
#include "ispso/fitness.hpp"
#include "testutil.hpp"

using namespace ispso;

TEST_CASE("compare_solutions ordering rules") {
    const double eps = 1e-9;
    CHECK(compare_solutions({0.95, 3, 0}, {0.90, 1, 0}, eps) == std::strong_ordering::greater);
    CHECK(compare_solutions({0.95, 3, 0}, {0.95, 2, 0}, eps) == std::strong_ordering::less);
    CHECK(compare_solutions({0.5, 4, 0}, {0.5, 4, 0}, eps) == std::strong_ordering::equal);
    // near-tie within eps resolves by subset size
    CHECK(compare_solutions({0.5 + 1e-12, 2, 0}, {0.5, 5, 0}, eps) ==
          std::strong_ordering::greater);
}

TEST_CASE("compare_solutions is a total order on grid-valued fitnesses") {
    Rng rng(3);
    const double eps = 1e-9;
    const auto random_fitness = [&] {
        return FitnessValue{static_cast<double>(rng.next_index(20)) / 20.0,
                            rng.next_index(10), 0};
    };
    for (int rep = 0; rep < 500; ++rep) {
        const FitnessValue a = random_fitness(), b = random_fitness(), c = random_fitness();
        const auto ab = compare_solutions(a, b, eps);
        const auto ba = compare_solutions(b, a, eps);
        if (ab == std::strong_ordering::greater) CHECK(ba == std::strong_ordering::less);
        if (ab == std::strong_ordering::less) CHECK(ba == std::strong_ordering::greater);
        if (ab == std::strong_ordering::equal) CHECK(ba == std::strong_ordering::equal);
        // transitivity of "not worse than"
        if (compare_solutions(a, b, eps) != std::strong_ordering::less &&
            compare_solutions(b, c, eps) != std::strong_ordering::less)
            CHECK(compare_solutions(a, c, eps) != std::strong_ordering::less);
    }
}

TEST_CASE("knn_predict golden cases") {
    // train = {(0,0)->A, (1,0)->A, (4,0)->B}, query (2,0), k=3 -> A by majority
    const Dataset train = testutil::make_dataset({0, 0, 1, 0, 4, 0}, {0, 0, 1}, 2);
    const std::vector<double> query = {2, 0};
    KnnParams p;
    p.k = 3;
    CHECK(knn_predict(train, query, p) == std::vector<int>{0});

    p.k = 1;
    CHECK(knn_predict(train, std::vector<double>{4.0, 0.0}, p) == std::vector<int>{1});  // zero distance wins

    const Dataset one_row = testutil::make_dataset({3.0, 9.0}, {1, 0}, 1);
    p.k = 1;
    const auto pred = knn_predict(one_row, std::vector<double>{100.0, -5.0, 3.1}, p);
    CHECK(pred == std::vector<int>{0, 1, 1});

    p.k = 5;
    CHECK_THROWS_AS(knn_predict(one_row, query, p), Error);
}

TEST_CASE("knn_predict distance ties resolve to the lower training index") {
    // Two training rows equidistant from the query, different labels.
    const Dataset train = testutil::make_dataset({-1.0, 1.0}, {1, 0}, 1);
    KnnParams p;
    p.k = 1;
    CHECK(knn_predict(train, std::vector<double>{0.0}, p) == std::vector<int>{1});
}

TEST_CASE("knn_predict self-queries return training labels") {
    Rng rng(17);
    const Dataset d = testutil::random_dataset(rng, 25, 4, 3);
    KnnParams p;
    p.k = 1;
    CHECK(knn_predict(d, d.values, p) == d.labels);
}

TEST_CASE("knn_predict agrees with the brute-force oracle") {
    Rng rng(23);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t rows = 5 + rng.next_index(25);
        const std::size_t feats = 1 + rng.next_index(8);
        const Dataset d = testutil::random_dataset(rng, rows, feats, 2 + rng.next_index(3));
        std::vector<double> queries((3 + rng.next_index(10)) * feats);
        for (double& v : queries) v = rng.next_unit() * 10.0 - 5.0;
        KnnParams p;
        p.k = 1 + rng.next_index(std::min<std::size_t>(rows, 7));
        CHECK(knn_predict(d, queries, p) == testutil::brute_force_knn(d, queries, p.k));
    }
}

TEST_CASE("cross_validated_accuracy on a separable feature") {
    // Feature 0 separates classes perfectly; feature 1 is noise.
    std::vector<double> values;
    std::vector<int> labels;
    Rng rng(29);
    for (int i = 0; i < 30; ++i) {
        const int cls = i % 2;
        values.push_back(cls == 0 ? -5.0 + rng.next_unit() : 5.0 + rng.next_unit());
        values.push_back(rng.next_unit());
        labels.push_back(cls);
    }
    const Dataset d = testutil::make_dataset(std::move(values), std::move(labels), 2);
    const FoldPlan plan = stratified_kfold(d, 10, 1);
    FeatureMask m(2);
    m.set(0);
    CHECK(cross_validated_accuracy(d, m, plan, KnnParams{}) == 1.0);
}

TEST_CASE("cross_validated_accuracy near chance on label-independent features") {
    Rng rng(31);
    std::vector<double> values(1000 * 3);
    for (double& v : values) v = rng.next_unit();
    std::vector<int> labels(1000);
    for (std::size_t i = 0; i < 1000; ++i) labels[i] = static_cast<int>(i % 2);
    const Dataset d = testutil::make_dataset(std::move(values), std::move(labels), 3);
    const FoldPlan plan = stratified_kfold(d, 10, 2);
    const double acc = cross_validated_accuracy(d, FeatureMask::all_set(3), plan, KnnParams{});
    CHECK(acc >= 0.40);
    CHECK(acc <= 0.60);
}

TEST_CASE("cross_validated_accuracy matches the brute-force CV oracle") {
    Rng rng(37);
    for (int rep = 0; rep < 10; ++rep) {
        const Dataset d = testutil::random_dataset(rng, 20 + rng.next_index(20), 5, 2);
        const FoldPlan plan = stratified_kfold(d, 5, rep);
        FeatureMask m(5);
        for (std::size_t j = 0; j < 5; ++j)
            if (rng.next_unit() < 0.5) m.set(j);
        if (!m.any()) m.set(0);
        KnnParams p;
        p.k = 1 + rng.next_index(3);
        CHECK(cross_validated_accuracy(d, m, plan, p) ==
              doctest::Approx(testutil::brute_force_cv(d, m, plan, p.k)).epsilon(1e-12));
    }
}

TEST_CASE("evaluate_fitness is deterministic and counts features") {
    const Dataset iris = load_dataset("data/iris.csv", "class");
    const Dataset norm = normalize(iris, -1.0, 1.0);
    const FoldPlan plan = stratified_kfold(norm, 10, 5);
    FeatureMask m(4);
    m.set(2);
    m.set(3);
    const FitnessValue a = evaluate_fitness(norm, m, plan, KnnParams{});
    const FitnessValue b = evaluate_fitness(norm, m, plan, KnnParams{});
    CHECK(a.cv_accuracy == b.cv_accuracy);
    CHECK(a.n_selected == 2);

    // All features on iris: classically around 0.96.
    const FitnessValue full = evaluate_fitness(norm, FeatureMask::all_set(4), plan, KnnParams{});
    CHECK(full.cv_accuracy >= 0.90);
    CHECK(full.cv_accuracy <= 1.0);

    CHECK_THROWS_AS(evaluate_fitness(norm, FeatureMask(4), plan, KnnParams{}), Error);
}

TEST_CASE("FitnessEvaluator caches without changing results") {
    Rng rng(41);
    const Dataset d = testutil::random_dataset(rng, 30, 6, 2);
    const FoldPlan plan = stratified_kfold(d, 5, 1);
    const FitnessEvaluator ev(d, plan, KnnParams{});

    FeatureMask m(6);
    m.set(1);
    m.set(4);
    const FitnessValue first = ev.evaluate(m);
    const FitnessValue again = ev.evaluate(m);
    CHECK(first.cv_accuracy == again.cv_accuracy);
    CHECK(ev.evaluations() == 1);
    CHECK(ev.cache_size() == 1);
    CHECK(first == evaluate_fitness(d, m, plan, KnnParams{}));
}

TEST_CASE("leakage-free fold normalization changes only the scaling") {
    Rng rng(43);
    const Dataset d = testutil::random_dataset(rng, 40, 4, 2);
    const FoldPlan plan = stratified_kfold(d, 5, 7);
    const FeatureMask m = FeatureMask::all_set(4);

    const double plain = cross_validated_accuracy(d, m, plan, KnnParams{});
    const double safe = cross_validated_accuracy(d, m, plan, KnnParams{},
                                                 FoldNormalization{-1.0, 1.0});
    CHECK(plain >= 0.0);
    CHECK(safe >= 0.0);
    CHECK(safe <= 1.0);

    // With per-fold scaling of an already-uniform dataset the answers stay
    // deterministic across calls.
    CHECK(safe == cross_validated_accuracy(d, m, plan, KnnParams{},
                                           FoldNormalization{-1.0, 1.0}));
}
