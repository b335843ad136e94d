#include "ispso/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ispso {

std::size_t feature_budget(std::size_t n_features, std::size_t n_samples, double v, double r) {
    if (v < 0.0 || v > 1.0) throw Error("feature_budget: v must lie in [0,1]");
    if (r < 1.0 || r > 50.0) throw Error("feature_budget: r must lie in [1,50]");
    const double cr = static_cast<double>(n_samples);
    if (cr - r <= 0.0) throw Error("feature_budget: sample count must exceed r");
    const double n = static_cast<double>(n_features);
    const double k_raw = ((n - v * n) + cr) / (cr - r);
    const auto k = static_cast<std::size_t>(std::ceil(k_raw));
    return std::clamp<std::size_t>(k, 1, n_features);
}

double pearson(std::span<const double> xi, std::span<const double> xj) {
    if (xi.size() != xj.size()) throw Error("pearson: length mismatch");
    const std::size_t n = xi.size();
    if (n < 2) throw Error("pearson: need at least two observations");

    double mi = 0.0, mj = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        mi += xi[t];
        mj += xj[t];
    }
    mi /= static_cast<double>(n);
    mj /= static_cast<double>(n);

    double sij = 0.0, sii = 0.0, sjj = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double di = xi[t] - mi;
        const double dj = xj[t] - mj;
        sij += di * dj;
        sii += di * di;
        sjj += dj * dj;
    }
    if (sii == 0.0 || sjj == 0.0) return 0.0;  // constant input carries no signal
    return sij / (std::sqrt(sii) * std::sqrt(sjj));
}

CorrelationProfile CorrelationProfile::from_dataset(const Dataset& d) {
    CorrelationProfile p;
    p.n_ = d.n_features;
    p.c_.assign(p.n_ * p.n_, 0.0);

    std::vector<std::vector<double>> cols(d.n_features, std::vector<double>(d.n_samples));
    for (std::size_t i = 0; i < d.n_samples; ++i)
        for (std::size_t j = 0; j < d.n_features; ++j) cols[j][i] = d.at(i, j);

    for (std::size_t i = 0; i < p.n_; ++i) {
        p.c_[i * p.n_ + i] = 1.0;
        for (std::size_t j = i + 1; j < p.n_; ++j) {
            const double c = pearson(cols[i], cols[j]);
            p.c_[i * p.n_ + j] = c;
            p.c_[j * p.n_ + i] = c;
        }
    }
    return p;
}

double CorrelationProfile::mean_abs_correlation(std::size_t i, const FeatureMask& mask) const {
    if (mask.size() != n_) throw Error("mean_abs_correlation: mask length mismatch");
    if (!mask.test(i)) throw Error("mean_abs_correlation: feature not in mask");
    const std::size_t f = mask.count();
    if (f < 2) throw Error("mean_abs_correlation: need at least two masked features");

    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
        if (j != i && mask.test(j)) sum += std::abs(coefficient(i, j));
    return sum / static_cast<double>(f - 1);
}

void record_votes(StorageList& list, const SwarmState& swarm,
                  const std::vector<FitnessValue>& fitnesses, std::size_t iteration,
                  std::size_t record_every, double tie_eps) {
    if (record_every == 0 || iteration % record_every != 0)
        throw Error("record_votes: iteration is not on the recording schedule");
    if (std::find(list.recorded_iterations.begin(), list.recorded_iterations.end(),
                  iteration) != list.recorded_iterations.end())
        throw Error("record_votes: iteration already recorded");
    if (fitnesses.size() != swarm.size())
        throw Error("record_votes: one fitness per particle required");

    const auto top = static_cast<std::size_t>(
        std::ceil(list.top_fraction * static_cast<double>(swarm.size())));
    std::vector<std::size_t> order(swarm.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return is_better(fitnesses[a], fitnesses[b], tie_eps);
    });

    for (std::size_t t = 0; t < std::min(top, order.size()); ++t) {
        const FeatureMask& pos = swarm.particles[order[t]].position;
        for (std::size_t j = 0; j < pos.size(); ++j)
            if (pos.test(j)) ++list.votes[j];
    }
    list.recorded_iterations.push_back(iteration);
}

std::vector<double> boltzmann_probs(std::span<const std::uint64_t> votes, double temperature,
                                    bool invert_sign) {
    if (temperature <= 0.0) throw Error("boltzmann_probs: temperature must be positive");
    if (votes.empty()) throw Error("boltzmann_probs: empty vote vector");

    const double sign = invert_sign ? -1.0 : 1.0;
    double peak = -std::numeric_limits<double>::infinity();
    for (std::uint64_t v : votes)
        peak = std::max(peak, sign * static_cast<double>(v) / temperature);

    std::vector<double> p(votes.size());
    double total = 0.0;
    for (std::size_t i = 0; i < votes.size(); ++i) {
        p[i] = std::exp(sign * static_cast<double>(votes[i]) / temperature - peak);
        total += p[i];
    }
    for (double& x : p) x /= total;
    return p;
}

FeatureMask seed_particle(const StorageList& list, std::size_t K,
                          const CorrelationProfile& profile, double temperature,
                          bool invert_sign, Rng& rng) {
    const std::size_t n = list.votes.size();
    if (profile.n_features() != n) throw Error("seed_particle: profile size mismatch");
    if (K < 1) throw Error("seed_particle: K must be positive");
    if (K > n) throw Error("seed_particle: K exceeds feature count");

    std::vector<double> weights = boltzmann_probs(list.votes, temperature, invert_sign);
    std::vector<std::size_t> alive(n);
    std::iota(alive.begin(), alive.end(), 0);

    FeatureMask mask(n);
    for (std::size_t draw = 0; draw < K; ++draw) {
        double total = 0.0;
        for (std::size_t a : alive) total += weights[a];
        const double u = rng.next_unit() * total;
        double acc = 0.0;
        std::size_t chosen = alive.back();
        for (std::size_t a : alive) {
            acc += weights[a];
            if (u < acc) {
                chosen = a;
                break;
            }
        }
        mask.set(chosen);
        alive.erase(std::find(alive.begin(), alive.end(), chosen));
    }
    return mask;
}

FeatureMask prune_particle(const FeatureMask& mask, const CorrelationProfile& profile,
                           std::size_t K, std::span<const std::uint64_t> votes) {
    if (mask.count() <= K) throw Error("prune_particle: mask already within budget");
    if (profile.n_features() != mask.size()) throw Error("prune_particle: profile size mismatch");

    FeatureMask out = mask;
    while (out.count() > K) {
        const std::vector<std::size_t> sel = out.selected();
        std::size_t victim = sel.front();
        double worst = -1.0;
        for (std::size_t i : sel) {
            const double cor = out.count() >= 2 ? profile.mean_abs_correlation(i, out) : 0.0;
            bool replace = cor > worst;
            if (!replace && cor == worst && !votes.empty() && votes[i] < votes[victim])
                replace = true;
            if (replace) {
                worst = cor;
                victim = i;
            }
        }
        out.set(victim, false);
    }
    return out;
}

std::vector<std::size_t> apply_seeding(SwarmState& swarm, const StorageList& list,
                                       const SeedingParams& params, std::size_t K,
                                       const CorrelationProfile& profile,
                                       const std::vector<FitnessValue>& fitnesses,
                                       double tie_eps, Rng& rng) {
    params.validate();
    if (fitnesses.size() != swarm.size())
        throw Error("apply_seeding: one fitness per particle required");

    const auto n_seed = static_cast<std::size_t>(
        std::floor(params.seed_fraction * static_cast<double>(swarm.size())));
    if (n_seed == 0) return {};

    std::uint64_t max_vote = 0;
    for (std::uint64_t v : list.votes) max_vote = std::max(max_vote, v);
    const double temperature = params.temperature
                                   ? *params.temperature
                                   : std::max(1.0, static_cast<double>(max_vote) / 3.0);

    // Worst first, swarm-best holder excluded.
    std::vector<std::size_t> order(swarm.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return is_better(fitnesses[b], fitnesses[a], tie_eps);
    });
    const std::size_t holder = swarm.gbest_holder(tie_eps);

    std::vector<std::size_t> seeded;
    for (std::size_t idx : order) {
        if (seeded.size() == n_seed) break;
        if (idx == holder) continue;
        FeatureMask fresh = seed_particle(list, K, profile, temperature, params.invert_sign, rng);
        if (fresh.count() > K) fresh = prune_particle(fresh, profile, K, list.votes);
        ParticleState& p = swarm.particles[idx];
        p.position = std::move(fresh);
        std::fill(p.velocity.begin(), p.velocity.end(), 0.0);
        seeded.push_back(idx);
    }
    return seeded;
}

}  // namespace ispso
