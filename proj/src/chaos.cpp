#include "ispso/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ispso {

void ChaosConfig::validate() const {
    if (!(seed_x0 > 0.0 && seed_x0 < 1.0))
        throw Error("chaos.seed must lie strictly inside (0,1)");
    if (map_kind == ChaosMap::logistic) {
        for (double bad : {0.25, 0.5, 0.75})
            if (seed_x0 == bad)
                throw Error("chaos.seed " + std::to_string(bad) +
                            " yields a degenerate logistic orbit");
        if (alpha <= 0.0 || alpha > 4.0)
            throw Error("chaos.alpha must lie in (0,4]");
    }
}

double logistic_step(double x, double alpha) {
    if (x < 0.0 || x > 1.0) throw Error("logistic_step: x outside [0,1]");
    return alpha * x * (1.0 - x);
}

double tent_step(double x) {
    if (x < 0.0 || x > 1.0) throw Error("tent_step: x outside [0,1]");
    return 2.0 * std::min(x, 1.0 - x);
}

int tent_binarize(double x) {
    if (x < 0.0 || x > 1.0) throw Error("tent_binarize: x outside [0,1]");
    return x >= 0.5 ? 1 : 0;
}

std::vector<double> chaotic_sequence(const ChaosConfig& cfg, std::size_t length) {
    cfg.validate();
    if (length == 0) throw Error("chaotic_sequence: length must be positive");

    const bool logistic = cfg.map_kind == ChaosMap::logistic;
    double x = cfg.seed_x0;
    for (std::size_t i = 0; i < cfg.burn_in; ++i)
        x = logistic ? logistic_step(x, cfg.alpha) : tent_step(x);

    std::vector<double> seq(length);
    for (std::size_t i = 0; i < length; ++i) {
        x = logistic ? logistic_step(x, cfg.alpha) : tent_step(x);
        seq[i] = x;
    }
    return seq;
}

InitialPopulation init_population(std::size_t n_particles, std::size_t n_features,
                                  const ChaosConfig& cfg, Rng& repair_rng) {
    if (n_particles < 1) throw Error("init_population: need at least one particle");
    if (n_features < 1) throw Error("init_population: need at least one feature");

    const std::vector<double> orbit = chaotic_sequence(cfg, n_particles * n_features);

    InitialPopulation pop;
    pop.positions.reserve(n_particles);
    pop.velocities.assign(n_particles, std::vector<double>(n_features, 0.0));
    for (std::size_t p = 0; p < n_particles; ++p) {
        FeatureMask mask(n_features);
        for (std::size_t j = 0; j < n_features; ++j)
            mask.set(j, tent_binarize(orbit[p * n_features + j]) == 1);
        if (!mask.any()) mask.set(repair_rng.next_index(n_features));
        pop.positions.push_back(std::move(mask));
    }
    return pop;
}

}  // namespace ispso
