#include "ispso/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace ispso {

std::string to_string(Variant v) {
    return v == Variant::ispso_global ? "ispso_global" : "plain_bpso";
}

Variant variant_from_string(const std::string& s) {
    if (s == "ispso_global") return Variant::ispso_global;
    if (s == "plain_bpso") return Variant::plain_bpso;
    throw Error("unknown variant '" + s + "' (expected ispso_global or plain_bpso)");
}

void AlgorithmConfig::validate() const {
    pso.validate();
    seeding.validate();
    mutation.validate();
    if (chaos_seed) {
        ChaosConfig c = chaos;
        c.seed_x0 = *chaos_seed;
        c.validate();
    }
    if (knn.k < 1) throw Error("knn.k must be at least 1");
    if (knn.tie_eps < 0.0) throw Error("fitness.tie_eps must be non-negative");
    if (cv_folds < 2) throw Error("cv.folds must be at least 2");
    if (norm_upper <= norm_lower) throw Error("normalize.upper must exceed normalize.lower");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic chaotic seed in (0,1) clear of degenerate logistic orbits.
double derive_chaos_seed(std::uint64_t run_seed) {
    std::uint64_t h = splitmix64(run_seed ^ 0xc4a05d9ac2b1f7e3ULL);
    for (;;) {
        const double x = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (x > 0.01 && x < 0.99 && x != 0.25 && x != 0.5 && x != 0.75) return x;
        h = splitmix64(h);
    }
}

std::vector<FeatureMask> uniform_random_positions(std::size_t n_particles,
                                                  std::size_t n_features, Rng& rng) {
    std::vector<FeatureMask> out;
    out.reserve(n_particles);
    for (std::size_t p = 0; p < n_particles; ++p) {
        FeatureMask mask(n_features);
        for (std::size_t j = 0; j < n_features; ++j) mask.set(j, rng.next_unit() < 0.5);
        if (!mask.any()) mask.set(rng.next_index(n_features));
        out.push_back(std::move(mask));
    }
    return out;
}

}  // namespace

RunResult run_once(const Dataset& d, const AlgorithmConfig& cfg, std::uint64_t seed,
                   const CorrelationProfile* profile) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    const bool ispso = cfg.variant == Variant::ispso_global;
    const double eps = cfg.knn.tie_eps;
    const std::size_t n = cfg.pso.n_particles;
    const std::size_t dim = d.n_features;

    const std::size_t budget = feature_budget(d.n_features, d.n_samples, cfg.seeding.v,
                                              cfg.seeding.r);

    CorrelationProfile local_profile;
    if (!profile) {
        local_profile = CorrelationProfile::from_dataset(d);
        profile = &local_profile;
    }

    const FoldPlan plan = stratified_kfold(d, cfg.cv_folds, splitmix64(seed));
    std::optional<FoldNormalization> fold_norm;
    if (cfg.leakage_free_cv) fold_norm = FoldNormalization{cfg.norm_lower, cfg.norm_upper};
    const FitnessEvaluator evaluator(d, plan, cfg.knn, fold_norm);

    Rng rng(seed);

    SwarmState swarm;
    swarm.particles.resize(n);
    if (ispso) {
        ChaosConfig chaos = cfg.chaos;
        chaos.seed_x0 = cfg.chaos_seed ? *cfg.chaos_seed : derive_chaos_seed(seed);
        InitialPopulation pop = init_population(n, dim, chaos, rng);
        for (std::size_t i = 0; i < n; ++i) {
            swarm.particles[i].position = std::move(pop.positions[i]);
            swarm.particles[i].velocity = std::move(pop.velocities[i]);
        }
    } else {
        std::vector<FeatureMask> pos = uniform_random_positions(n, dim, rng);
        for (std::size_t i = 0; i < n; ++i) {
            swarm.particles[i].position = std::move(pos[i]);
            swarm.particles[i].velocity.assign(dim, 0.0);
        }
    }
    for (ParticleState& p : swarm.particles) {
        p.pbest_position = p.position;
        p.pbest_fitness = FitnessValue::worst();
    }

    StorageList storage(dim, cfg.seeding.top_fraction);
    std::vector<FitnessValue> fitnesses(n);
    const auto evaluate_all = [&] {
        for (std::size_t i = 0; i < n; ++i)
            fitnesses[i] = evaluator.evaluate(swarm.particles[i].position);
    };

    RunResult result;
    result.seed = seed;

    if (cfg.pso.max_iterations == 0) {
        evaluate_all();
        update_bests(swarm, fitnesses, eps);
        result.history.push_back(swarm.gbest_fitness);
    }

    for (std::size_t t = 1; t <= cfg.pso.max_iterations; ++t) {
        evaluate_all();
        update_bests(swarm, fitnesses, eps);

        std::vector<std::size_t> hold_position;
        if (ispso && t % cfg.seeding.record_every == 0) {
            record_votes(storage, swarm, fitnesses, t, cfg.seeding.record_every, eps);
            // Freshly seeded positions sit out this move phase so they are
            // evaluated intact next iteration.
            hold_position = apply_seeding(swarm, storage, cfg.seeding, budget, *profile,
                                          fitnesses, eps, rng);
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(hold_position.begin(), hold_position.end(), i) != hold_position.end())
                continue;
            ParticleState& p = swarm.particles[i];
            p.velocity = update_velocity(p, swarm.gbest_position, cfg.pso, rng);
            p.position = update_position(p.velocity, rng);
        }

        if (ispso && rng.next_unit() < cfg.mutation.trigger_prob) {
            const FeatureMask mutant = mutate_gbest(swarm.gbest_position, cfg.mutation, rng);
            const FitnessValue mf = evaluator.evaluate(mutant);
            replace_gworst(swarm, mutant, mf, fitnesses, eps);
        }

        swarm.iteration = t;
        result.history.push_back(swarm.gbest_fitness);
    }

    result.best_mask = swarm.gbest_position;
    result.best_fitness = swarm.gbest_fitness;
    if (cfg.enforce_final_budget && result.best_mask.count() > budget) {
        result.best_mask = prune_particle(result.best_mask, *profile, budget, storage.votes);
        result.best_fitness = evaluator.evaluate(result.best_mask);
    }

    std::vector<int> predictions;
    cross_validated_predictions(d, result.best_mask, plan, cfg.knn, predictions, fold_norm);
    result.scores = precision_recall_f(confusion(d.labels, predictions, d.n_classes()));
    result.evaluations = evaluator.evaluations();

    const auto t_end = std::chrono::steady_clock::now();
    result.wall_time_s = std::chrono::duration<double>(t_end - t_start).count();
    return result;
}

BatchResult run_batch(const Dataset& d, const AlgorithmConfig& cfg, std::size_t n_runs,
                      std::uint64_t base_seed, std::size_t jobs) {
    if (n_runs < 1) throw Error("run_batch: need at least one run");
    cfg.validate();

    const CorrelationProfile profile = CorrelationProfile::from_dataset(d);

    BatchResult batch;
    batch.runs.resize(n_runs);

    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, n_runs));
    if (workers == 1) {
        for (std::size_t i = 0; i < n_runs; ++i)
            batch.runs[i] = run_once(d, cfg, base_seed + i, &profile);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_runs) return;
                    try {
                        batch.runs[i] = run_once(d, cfg, base_seed + i, &profile);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    BatchAggregate& agg = batch.aggregate;
    for (const RunResult& r : batch.runs) {
        agg.mean_accuracy += r.best_fitness.cv_accuracy;
        agg.mean_subset_size += static_cast<double>(r.best_fitness.n_selected);
        agg.mean_wall_time_s += r.wall_time_s;
    }
    const auto dn = static_cast<double>(n_runs);
    agg.mean_accuracy /= dn;
    agg.mean_subset_size /= dn;
    agg.mean_wall_time_s /= dn;
    if (n_runs > 1) {
        double ss = 0.0;
        for (const RunResult& r : batch.runs) {
            const double dev = r.best_fitness.cv_accuracy - agg.mean_accuracy;
            ss += dev * dev;
        }
        agg.sd_accuracy = std::sqrt(ss / (dn - 1.0));
    }
    return batch;
}

}  // namespace ispso
