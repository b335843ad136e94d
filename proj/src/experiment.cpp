#include "ispso/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ispso/dataset.hpp"
#include "json.hpp"

namespace ispso {

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
}

void check_keys(const json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return it.key() == k;
            }) == allowed.end()) {
            const std::string where = scope.empty() ? it.key() : scope + "." + it.key();
            throw Error("unknown config key '" + where + "'");
        }
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(std::string("config key '") + key + "' has the wrong type");
    }
}

void parse_pso(const json& j, PsoParams& p) {
    check_keys(j, "pso", {"c1", "c2", "vmax", "particles", "iterations"});
    p.c1 = get_or(j, "c1", p.c1);
    p.c2 = get_or(j, "c2", p.c2);
    p.vmax = get_or(j, "vmax", p.vmax);
    p.n_particles = get_or(j, "particles", p.n_particles);
    p.max_iterations = get_or(j, "iterations", p.max_iterations);
}

void parse_chaos(const json& j, AlgorithmConfig& cfg) {
    check_keys(j, "chaos", {"map", "alpha", "seed", "burn_in"});
    if (j.contains("map")) {
        const auto m = j.at("map").get<std::string>();
        if (m == "logistic") cfg.chaos.map_kind = ChaosMap::logistic;
        else if (m == "tent") cfg.chaos.map_kind = ChaosMap::tent;
        else throw Error("chaos.map must be 'logistic' or 'tent'");
    }
    cfg.chaos.alpha = get_or(j, "alpha", cfg.chaos.alpha);
    cfg.chaos.burn_in = get_or(j, "burn_in", cfg.chaos.burn_in);
    if (j.contains("seed") && !j.at("seed").is_null())
        cfg.chaos_seed = j.at("seed").get<double>();
}

void parse_seeding(const json& j, ExperimentSpec& spec) {
    check_keys(j, "seeding", {"r", "v", "temperature", "record_every", "top_fraction",
                              "seed_fraction", "invert_sign"});
    SeedingParams& s = spec.base.seeding;
    if (j.contains("r")) spec.seeding_r = j.at("r").get<double>();
    if (j.contains("v")) spec.seeding_v = j.at("v").get<double>();
    if (spec.seeding_r && (*spec.seeding_r < 1.0 || *spec.seeding_r > 50.0))
        throw Error("seeding.r must lie in [1,50]");
    if (spec.seeding_v && (*spec.seeding_v < 0.0 || *spec.seeding_v > 1.0))
        throw Error("seeding.v must lie in [0,1]");
    if (j.contains("temperature") && !j.at("temperature").is_null())
        s.temperature = j.at("temperature").get<double>();
    s.record_every = get_or(j, "record_every", s.record_every);
    s.top_fraction = get_or(j, "top_fraction", s.top_fraction);
    s.seed_fraction = get_or(j, "seed_fraction", s.seed_fraction);
    s.invert_sign = get_or(j, "invert_sign", s.invert_sign);
}

void parse_mutation(const json& j, MutationParams& m) {
    check_keys(j, "mutation", {"trigger_prob", "per_bit_prob", "mode"});
    m.trigger_prob = get_or(j, "trigger_prob", m.trigger_prob);
    if (j.contains("per_bit_prob") && !j.at("per_bit_prob").is_null())
        m.per_bit_prob = j.at("per_bit_prob").get<double>();
    if (j.contains("mode")) {
        const auto mode = j.at("mode").get<std::string>();
        if (mode == "flip") m.mode = MutationMode::flip;
        else if (mode == "reverse") m.mode = MutationMode::reverse;
        else throw Error("mutation.mode must be 'flip' or 'reverse'");
    }
}

DatasetEntry parse_dataset_entry(const json& j, const json& manifest) {
    check_keys(j, "datasets[]", {"name", "path", "label", "r", "v"});
    DatasetEntry e;
    if (!j.contains("name")) throw Error("datasets[]: every entry needs a name");
    e.name = j.at("name").get<std::string>();

    const json* m = nullptr;
    if (manifest.contains(e.name)) m = &manifest.at(e.name);
    if (m) check_keys(*m, "manifest." + e.name, {"path", "label"});

    if (j.contains("path")) e.path = j.at("path").get<std::string>();
    else if (m && m->contains("path")) e.path = m->at("path").get<std::string>();
    else throw Error("dataset '" + e.name + "': no path given and not in manifest");

    if (j.contains("label")) e.label_column = j.at("label").get<std::string>();
    else if (m && m->contains("label")) e.label_column = m->at("label").get<std::string>();

    if (j.contains("r")) {
        e.r = j.at("r").get<double>();
        if (*e.r < 1.0 || *e.r > 50.0)
            throw Error("dataset '" + e.name + "': seeding.r must lie in [1,50]");
    }
    if (j.contains("v")) {
        e.v = j.at("v").get<double>();
        if (*e.v < 0.0 || *e.v > 1.0)
            throw Error("dataset '" + e.name + "': seeding.v must lie in [0,1]");
    }
    return e;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& path) {
    const json root = load_json_file(path);
    if (!root.is_object()) throw Error(path + ": config must be a JSON object");
    check_keys(root, "", {"manifest", "datasets", "variants", "runs", "seed", "jobs", "out",
                          "formats", "pso", "chaos", "seeding", "mutation", "knn", "cv",
                          "fitness", "normalize", "budget"});

    ExperimentSpec spec;

    json manifest = json::object();
    if (root.contains("manifest")) {
        const auto mpath = root.at("manifest").get<std::string>();
        const std::filesystem::path base = std::filesystem::path(path).parent_path();
        manifest = load_json_file((base / mpath).string());
    }

    if (!root.contains("datasets") || !root.at("datasets").is_array() ||
        root.at("datasets").empty())
        throw Error("config needs a non-empty 'datasets' array");
    std::set<std::string> names;
    for (const json& dj : root.at("datasets")) {
        DatasetEntry e = parse_dataset_entry(dj, manifest);
        if (!names.insert(e.name).second)
            throw Error("duplicate dataset name '" + e.name + "'");
        spec.datasets.push_back(std::move(e));
    }

    if (root.contains("variants")) {
        spec.variants.clear();
        for (const json& vj : root.at("variants"))
            spec.variants.push_back(variant_from_string(vj.get<std::string>()));
        if (spec.variants.empty()) throw Error("'variants' must not be empty");
    }

    spec.n_runs = get_or<std::size_t>(root, "runs", spec.n_runs);
    if (spec.n_runs < 1) throw Error("runs must be at least 1");
    spec.base_seed = get_or<std::uint64_t>(root, "seed", spec.base_seed);
    spec.jobs = get_or<std::size_t>(root, "jobs", spec.jobs);
    spec.out_dir = get_or<std::string>(root, "out", spec.out_dir);
    if (root.contains("formats")) {
        spec.formats.clear();
        for (const json& fj : root.at("formats")) {
            const auto f = fj.get<std::string>();
            table_format_from_string(f);  // validates
            spec.formats.push_back(f);
        }
    }

    if (root.contains("pso")) parse_pso(root.at("pso"), spec.base.pso);
    if (root.contains("chaos")) parse_chaos(root.at("chaos"), spec.base);
    if (root.contains("seeding")) parse_seeding(root.at("seeding"), spec);
    if (root.contains("mutation")) parse_mutation(root.at("mutation"), spec.base.mutation);
    if (root.contains("knn")) {
        check_keys(root.at("knn"), "knn", {"k"});
        spec.base.knn.k = get_or<std::size_t>(root.at("knn"), "k", spec.base.knn.k);
    }
    if (root.contains("cv")) {
        check_keys(root.at("cv"), "cv", {"folds", "leakage_free"});
        spec.base.cv_folds = get_or<std::size_t>(root.at("cv"), "folds", spec.base.cv_folds);
        spec.base.leakage_free_cv =
            get_or(root.at("cv"), "leakage_free", spec.base.leakage_free_cv);
    }
    if (root.contains("fitness")) {
        check_keys(root.at("fitness"), "fitness", {"tie_eps"});
        spec.base.knn.tie_eps = get_or(root.at("fitness"), "tie_eps", spec.base.knn.tie_eps);
    }
    if (root.contains("normalize")) {
        check_keys(root.at("normalize"), "normalize", {"enabled", "lower", "upper"});
        spec.normalize_enabled = get_or(root.at("normalize"), "enabled", spec.normalize_enabled);
        spec.base.norm_lower = get_or(root.at("normalize"), "lower", spec.base.norm_lower);
        spec.base.norm_upper = get_or(root.at("normalize"), "upper", spec.base.norm_upper);
    }
    if (root.contains("budget")) {
        check_keys(root.at("budget"), "budget", {"enforce_final"});
        spec.base.enforce_final_budget =
            get_or(root.at("budget"), "enforce_final", spec.base.enforce_final_budget);
    }

    spec.base.validate();
    return spec;
}

AlgorithmConfig effective_config(const ExperimentSpec& spec, const DatasetEntry& entry,
                                 std::size_t n_samples, Variant variant) {
    AlgorithmConfig cfg = spec.base;
    cfg.variant = variant;
    if (entry.r) cfg.seeding.r = *entry.r;
    else if (spec.seeding_r) cfg.seeding.r = *spec.seeding_r;
    else cfg.seeding.r = n_samples > 500 ? 50.0 : 1.0;
    if (entry.v) cfg.seeding.v = *entry.v;
    else if (spec.seeding_v) cfg.seeding.v = *spec.seeding_v;
    cfg.validate();
    return cfg;
}

bool ReportTable::all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.failed; });
}

namespace {

json config_to_json(const AlgorithmConfig& cfg, std::size_t n_runs, std::uint64_t base_seed,
                    bool normalize_enabled) {
    json j;
    j["variant"] = to_string(cfg.variant);
    j["runs"] = n_runs;
    j["seed"] = base_seed;
    j["pso"] = {{"c1", cfg.pso.c1},
                {"c2", cfg.pso.c2},
                {"vmax", cfg.pso.vmax},
                {"particles", cfg.pso.n_particles},
                {"iterations", cfg.pso.max_iterations}};
    j["chaos"] = {{"map", cfg.chaos.map_kind == ChaosMap::logistic ? "logistic" : "tent"},
                  {"alpha", cfg.chaos.alpha},
                  {"burn_in", cfg.chaos.burn_in}};
    if (cfg.chaos_seed) j["chaos"]["seed"] = *cfg.chaos_seed;
    j["seeding"] = {{"r", cfg.seeding.r},
                    {"v", cfg.seeding.v},
                    {"record_every", cfg.seeding.record_every},
                    {"top_fraction", cfg.seeding.top_fraction},
                    {"seed_fraction", cfg.seeding.seed_fraction},
                    {"invert_sign", cfg.seeding.invert_sign}};
    if (cfg.seeding.temperature) j["seeding"]["temperature"] = *cfg.seeding.temperature;
    j["mutation"] = {{"trigger_prob", cfg.mutation.trigger_prob},
                     {"mode", cfg.mutation.mode == MutationMode::flip ? "flip" : "reverse"}};
    if (cfg.mutation.per_bit_prob) j["mutation"]["per_bit_prob"] = *cfg.mutation.per_bit_prob;
    j["knn"] = {{"k", cfg.knn.k}};
    j["cv"] = {{"folds", cfg.cv_folds}, {"leakage_free", cfg.leakage_free_cv}};
    j["fitness"] = {{"tie_eps", cfg.knn.tie_eps}};
    j["normalize"] = {{"enabled", normalize_enabled},
                      {"lower", cfg.norm_lower},
                      {"upper", cfg.norm_upper}};
    j["budget"] = {{"enforce_final", cfg.enforce_final_budget}};
    return j;
}

std::vector<std::size_t> one_based(const FeatureMask& mask) {
    std::vector<std::size_t> out = mask.selected();
    for (std::size_t& i : out) ++i;
    return out;
}

const RunResult& best_run(const BatchResult& batch, double tie_eps) {
    const RunResult* best = &batch.runs.front();
    for (const RunResult& r : batch.runs)
        if (is_better(r.best_fitness, best->best_fitness, tie_eps)) best = &r;
    return *best;
}

void write_pair_files(const std::filesystem::path& out_dir, const std::string& dataset,
                      const std::string& variant, const AlgorithmConfig& cfg,
                      const ExperimentSpec& spec, const BatchResult& batch) {
    json results;
    results["dataset"] = dataset;
    results["variant"] = variant;
    results["config"] = config_to_json(cfg, spec.n_runs, spec.base_seed, spec.normalize_enabled);
    results["runs"] = json::array();
    for (const RunResult& r : batch.runs) {
        results["runs"].push_back({{"seed", r.seed},
                                   {"accuracy", r.best_fitness.cv_accuracy},
                                   {"n_selected", r.best_fitness.n_selected},
                                   {"selected", one_based(r.best_mask)},
                                   {"precision", r.scores.precision},
                                   {"recall", r.scores.recall},
                                   {"f_measure", r.scores.f_measure},
                                   {"evaluations", r.evaluations}});
    }
    results["aggregate"] = {{"mean_accuracy", batch.aggregate.mean_accuracy},
                            {"sd_accuracy", batch.aggregate.sd_accuracy},
                            {"mean_subset_size", batch.aggregate.mean_subset_size}};

    const std::string stem = dataset + "__" + variant;
    std::ofstream rf(out_dir / (stem + ".results.json"));
    rf << results.dump(2) << "\n";

    json timing;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    timing["generated_at_unix_s"] =
        std::chrono::duration_cast<std::chrono::seconds>(now).count();
    timing["wall_time_s"] = json::array();
    for (const RunResult& r : batch.runs) timing["wall_time_s"].push_back(r.wall_time_s);
    timing["mean_wall_time_s"] = batch.aggregate.mean_wall_time_s;
    std::ofstream tf(out_dir / (stem + ".timing.json"));
    tf << timing.dump(2) << "\n";
}

std::string format_percent(double value01) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", value01 * 100.0);
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string join_indices(const std::vector<std::size_t>& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(idx[i]);
    }
    return s;
}

}  // namespace

TableFormat table_format_from_string(const std::string& s) {
    if (s == "text") return TableFormat::text;
    if (s == "delimited") return TableFormat::delimited;
    if (s == "markdown") return TableFormat::markdown;
    throw Error("unknown table format '" + s + "' (expected text, delimited, or markdown)");
}

std::string render_table(const ReportTable& table, TableFormat format) {
    if (table.rows.empty()) throw Error("render_table: empty report");

    const std::vector<std::string> head = {"dataset", "variant",   "mean_acc%", "sd%",
                                           "mean_features", "best_run_features", "mean_time_s",
                                           "best"};
    std::vector<std::vector<std::string>> cells;
    for (const ReportRow& r : table.rows) {
        if (r.failed) {
            cells.push_back({r.dataset, r.variant, "FAILED: " + r.error, "-", "-", "-", "-", ""});
            continue;
        }
        std::vector<std::string> row = {r.dataset,
                                        r.variant,
                                        format_percent(r.aggregate.mean_accuracy),
                                        format_percent(r.aggregate.sd_accuracy),
                                        format_double(r.aggregate.mean_subset_size),
                                        join_indices(r.best_features),
                                        format_double(r.aggregate.mean_wall_time_s),
                                        r.best_in_dataset ? "*" : ""};
        if (format == TableFormat::markdown && r.best_in_dataset)
            row[2] = "**" + row[2] + "**";
        cells.push_back(std::move(row));
    }

    std::ostringstream out;
    if (format == TableFormat::delimited) {
        for (std::size_t c = 0; c < head.size(); ++c)
            out << head[c] << (c + 1 < head.size() ? "\t" : "\n");
        for (const auto& row : cells)
            for (std::size_t c = 0; c < row.size(); ++c)
                out << row[c] << (c + 1 < row.size() ? "\t" : "\n");
        return out.str();
    }

    if (format == TableFormat::markdown) {
        out << "| " ;
        for (const auto& h : head) out << h << " | ";
        out << "\n|";
        for (std::size_t c = 0; c < head.size(); ++c) out << " --- |";
        out << "\n";
        for (const auto& row : cells) {
            out << "| ";
            for (const auto& cell : row) out << cell << " | ";
            out << "\n";
        }
        return out.str();
    }

    std::vector<std::size_t> width(head.size());
    for (std::size_t c = 0; c < head.size(); ++c) width[c] = head[c].size();
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    const auto line = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << std::left << std::setw(static_cast<int>(width[c]) + 2) << row[c];
        out << "\n";
    };
    line(head);
    for (const auto& row : cells) line(row);
    return out.str();
}

void emit_table(const ReportTable& table, TableFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write table file: " + path);
    out << render_table(table, format);
}

ReportTable execute(const ExperimentSpec& spec) {
    std::filesystem::create_directories(spec.out_dir);

    struct Pair {
        std::size_t dataset_idx;
        Variant variant;
    };
    std::vector<Pair> pairs;
    for (std::size_t di = 0; di < spec.datasets.size(); ++di)
        for (Variant v : spec.variants) pairs.push_back({di, v});

    // Load every dataset once; a load failure fails all of its pairs.
    std::vector<std::optional<Dataset>> datasets(spec.datasets.size());
    std::vector<std::string> load_errors(spec.datasets.size());
    for (std::size_t di = 0; di < spec.datasets.size(); ++di) {
        const DatasetEntry& e = spec.datasets[di];
        try {
            Dataset d = load_dataset(e.path, e.label_column);
            d.name = e.name;
            if (spec.normalize_enabled)
                d = normalize(d, spec.base.norm_lower, spec.base.norm_upper);
            datasets[di] = std::move(d);
        } catch (const std::exception& ex) {
            load_errors[di] = ex.what();
        }
    }

    const std::size_t jobs =
        spec.jobs > 0 ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
    const std::size_t pair_workers = std::max<std::size_t>(1, std::min(jobs, pairs.size()));
    const std::size_t inner_jobs = std::max<std::size_t>(1, jobs / pair_workers);

    struct PairOutcome {
        bool failed = false;
        std::string error;
        AlgorithmConfig cfg;
        BatchResult batch;
    };
    std::vector<PairOutcome> outcomes(pairs.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t pi = next.fetch_add(1);
            if (pi >= pairs.size()) return;
            const Pair& pair = pairs[pi];
            PairOutcome& out = outcomes[pi];
            if (!datasets[pair.dataset_idx]) {
                out.failed = true;
                out.error = load_errors[pair.dataset_idx];
                continue;
            }
            const Dataset& d = *datasets[pair.dataset_idx];
            try {
                out.cfg = effective_config(spec, spec.datasets[pair.dataset_idx], d.n_samples,
                                           pair.variant);
                out.batch = run_batch(d, out.cfg, spec.n_runs, spec.base_seed, inner_jobs);
            } catch (const std::exception& ex) {
                out.failed = true;
                out.error = ex.what();
            }
        }
    };
    if (pair_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < pair_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Report assembly and file output, sequential and in pair order.
    ReportTable table;
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        const Pair& pair = pairs[pi];
        const PairOutcome& out = outcomes[pi];
        ReportRow row;
        row.dataset = spec.datasets[pair.dataset_idx].name;
        row.variant = to_string(pair.variant);
        if (out.failed) {
            row.failed = true;
            row.error = out.error;
        } else {
            row.aggregate = out.batch.aggregate;
            row.best_features = one_based(best_run(out.batch, out.cfg.knn.tie_eps).best_mask);
            write_pair_files(spec.out_dir, row.dataset, row.variant, out.cfg, spec, out.batch);
        }
        table.rows.push_back(std::move(row));
    }

    for (std::size_t di = 0; di < spec.datasets.size(); ++di) {
        double best = -1.0;
        for (const ReportRow& r : table.rows)
            if (!r.failed && r.dataset == spec.datasets[di].name)
                best = std::max(best, r.aggregate.mean_accuracy);
        if (best < 0.0) continue;
        for (ReportRow& r : table.rows)
            if (!r.failed && r.dataset == spec.datasets[di].name &&
                r.aggregate.mean_accuracy == best)
                r.best_in_dataset = true;
    }

    for (const std::string& f : spec.formats) {
        const TableFormat fmt = table_format_from_string(f);
        const char* ext = fmt == TableFormat::text ? "txt"
                          : fmt == TableFormat::markdown ? "md"
                                                         : "tsv";
        emit_table(table, fmt,
                   (std::filesystem::path(spec.out_dir) / (std::string("summary.") + ext))
                       .string());
    }
    return table;
}

}  // namespace ispso
