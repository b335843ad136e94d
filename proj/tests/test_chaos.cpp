#include "doctest.h"
#include "ispso/chaos.hpp"

using namespace ispso;

TEST_CASE("logistic_step golden values") {
    CHECK(logistic_step(0.0, 4.0) == 0.0);
    CHECK(logistic_step(0.5, 4.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(logistic_step(0.3, 4.0) == doctest::Approx(0.84).epsilon(1e-12));
    CHECK_THROWS_AS(logistic_step(-0.1, 4.0), Error);
    CHECK_THROWS_AS(logistic_step(1.1, 4.0), Error);
}

TEST_CASE("tent_binarize thresholds at one half") {
    CHECK(tent_binarize(0.7) == 1);
    CHECK(tent_binarize(0.2) == 0);
    CHECK(tent_binarize(0.5) == 1);
    CHECK(tent_binarize(0.0) == 0);
    CHECK(tent_binarize(1.0) == 1);
    CHECK_THROWS_AS(tent_binarize(-0.01), Error);
}

TEST_CASE("chaotic_sequence golden iterates and determinism") {
    ChaosConfig cfg;
    cfg.seed_x0 = 0.3;
    cfg.burn_in = 0;

    const auto seq = chaotic_sequence(cfg, 3);
    REQUIRE(seq.size() == 3);
    CHECK(seq[0] == doctest::Approx(0.84).epsilon(1e-12));
    CHECK(seq[1] == doctest::Approx(0.5376).epsilon(1e-12));
    CHECK(seq[2] == doctest::Approx(0.99434496).epsilon(1e-12));

    const auto one = chaotic_sequence(cfg, 1);
    CHECK(one[0] == logistic_step(0.3, cfg.alpha));

    CHECK(chaotic_sequence(cfg, 100) == chaotic_sequence(cfg, 100));
}

TEST_CASE("chaotic orbit stays inside [0,1] over 1e5 iterates") {
    ChaosConfig cfg;
    cfg.seed_x0 = 0.7;
    cfg.burn_in = 0;
    for (ChaosMap map : {ChaosMap::logistic, ChaosMap::tent}) {
        cfg.map_kind = map;
        const auto seq = chaotic_sequence(cfg, 100000);
        for (double x : seq) {
            REQUIRE(x >= 0.0);
            REQUIRE(x <= 1.0);
        }
    }
}

TEST_CASE("logistic invariant density is roughly symmetric about one half") {
    ChaosConfig cfg;
    cfg.seed_x0 = 0.613;
    cfg.burn_in = 100;
    const auto seq = chaotic_sequence(cfg, 10000);
    std::size_t high = 0;
    for (double x : seq) high += x >= 0.5;
    const double frac = static_cast<double>(high) / static_cast<double>(seq.size());
    CHECK(frac >= 0.40);
    CHECK(frac <= 0.60);
}

TEST_CASE("degenerate logistic seeds are rejected") {
    ChaosConfig cfg;
    for (double bad : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        cfg.seed_x0 = bad;
        CHECK_THROWS_AS(cfg.validate(), Error);
    }
    cfg.seed_x0 = 0.3;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("init_population hand-checked single particle") {
    ChaosConfig cfg;
    cfg.seed_x0 = 0.3;
    cfg.burn_in = 0;
    Rng rng(1);
    // Iterates 0.84, 0.5376, 0.9943... all >= 0.5.
    const InitialPopulation pop = init_population(1, 3, cfg, rng);
    REQUIRE(pop.positions.size() == 1);
    CHECK(pop.positions[0].to_string() == "111");
    CHECK(pop.velocities[0] == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("init_population stripes one orbit across particles") {
    ChaosConfig cfg;
    cfg.seed_x0 = 0.3;
    cfg.burn_in = 0;
    Rng rng(1);
    const InitialPopulation pop = init_population(4, 5, cfg, rng);
    const auto orbit = chaotic_sequence(cfg, 20);
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(pop.positions[p].test(j) == (tent_binarize(orbit[p * 5 + j]) == 1));
}

TEST_CASE("init_population never yields an empty mask and is deterministic") {
    ChaosConfig cfg;
    cfg.seed_x0 = 0.123;
    for (std::size_t features : {1u, 2u, 7u, 31u}) {
        Rng rng(9);
        const InitialPopulation pop = init_population(25, features, cfg, rng);
        for (const FeatureMask& m : pop.positions) CHECK(m.any());
    }

    Rng r1(5), r2(5);
    const auto a = init_population(10, 8, cfg, r1);
    const auto b = init_population(10, 8, cfg, r2);
    CHECK(a.positions == b.positions);
}
