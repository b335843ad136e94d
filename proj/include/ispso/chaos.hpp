#ifndef ISPSO_CHAOS_HPP
#define ISPSO_CHAOS_HPP

#include <cstddef>
#include <vector>

#include "ispso/core.hpp"

namespace ispso {

enum class ChaosMap { logistic, tent };

/// Parameters of the chaotic orbit used for population initialization.
struct ChaosConfig {
    ChaosMap map_kind = ChaosMap::logistic;
    double alpha = 4.0;     // logistic control parameter; 4 = fully chaotic
    double seed_x0 = 0.7;   // in (0,1), away from degenerate logistic orbits
    std::size_t burn_in = 100;

    void validate() const;
};

/// One logistic-map iterate: alpha * x * (1 - x).
double logistic_step(double x, double alpha);

/// One standard tent-map iterate: 2 * min(x, 1 - x).
double tent_step(double x);

/// Threshold a chaotic iterate to a bit: 1 when 0.5 <= x <= 1, else 0.
int tent_binarize(double x);

/// `length` iterates of the configured map from seed_x0, after discarding
/// burn_in leading values. Deterministic given cfg.
std::vector<double> chaotic_sequence(const ChaosConfig& cfg, std::size_t length);

struct InitialPopulation {
    std::vector<FeatureMask> positions;
    std::vector<std::vector<double>> velocities;  // all zero
};

/// Builds the swarm's starting positions by thresholding one shared chaotic
/// orbit, striped across particles (particle p owns iterates
/// [p*n_features, (p+1)*n_features)). Any all-zero mask gets one uniformly
/// chosen bit forced on via `repair_rng`. Velocities start at zero.
InitialPopulation init_population(std::size_t n_particles, std::size_t n_features,
                                  const ChaosConfig& cfg, Rng& repair_rng);

}  // namespace ispso

#endif
