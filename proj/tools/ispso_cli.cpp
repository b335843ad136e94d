#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ispso/dataset.hpp"
#include "ispso/experiment.hpp"
#include "ispso/fitness.hpp"
#include "ispso/optimizer.hpp"

namespace {

using nlohmann::json;

std::vector<std::size_t> parse_mask_list(const std::string& arg) {
    std::vector<std::size_t> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const long v = std::stol(tok);
        if (v < 1) throw ispso::Error("feature indices are 1-based; got " + tok);
        out.push_back(static_cast<std::size_t>(v - 1));
    }
    if (out.empty()) throw ispso::Error("--mask needs at least one feature index");
    return out;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::size_t> runs, std::optional<std::size_t> jobs,
            std::optional<std::string> out_dir) {
    ispso::ExperimentSpec spec = ispso::parse_spec(config_path);

    if (const char* env = std::getenv("ISPSO_OUT_DIR")) spec.out_dir = env;
    if (const char* env = std::getenv("ISPSO_JOBS")) spec.jobs = std::stoul(env);
    if (seed) spec.base_seed = *seed;
    if (runs) spec.n_runs = *runs;
    if (jobs) spec.jobs = *jobs;
    if (out_dir) spec.out_dir = *out_dir;

    const ispso::ReportTable table = ispso::execute(spec);
    std::cout << ispso::render_table(table, ispso::TableFormat::text);
    std::cout << "results written to " << spec.out_dir << "\n";
    return table.all_ok() ? 0 : 1;
}

int cmd_eval(const std::string& path, const std::string& label, const std::string& mask_arg,
             bool all_features, std::size_t folds, std::size_t k, bool do_normalize,
             std::uint64_t fold_seed) {
    ispso::Dataset d = ispso::load_dataset(path, label);
    if (do_normalize) d = ispso::normalize(d, -1.0, 1.0);

    ispso::FeatureMask mask;
    if (all_features) {
        mask = ispso::FeatureMask::all_set(d.n_features);
    } else {
        const auto idx = parse_mask_list(mask_arg);
        mask = ispso::FeatureMask::from_indices(d.n_features, idx);
    }

    const ispso::FoldPlan plan = ispso::stratified_kfold(d, folds, fold_seed);
    ispso::KnnParams params;
    params.k = k;
    const ispso::FitnessValue fv = ispso::evaluate_fitness(d, mask, plan, params);

    std::cout << "dataset:   " << path << "  (" << d.n_samples << " rows, " << d.n_features
              << " features, " << d.n_classes() << " classes)\n";
    std::cout << "features:  ";
    const auto sel = mask.selected();
    for (std::size_t i = 0; i < sel.size(); ++i) std::cout << (i ? "," : "") << sel[i] + 1;
    std::cout << "  (" << fv.n_selected << " selected)\n";
    std::cout << "cv:        " << folds << "-fold, " << k << "-NN, fold seed " << fold_seed
              << (do_normalize ? ", normalized [-1,1]" : ", raw values") << "\n";
    std::cout << "accuracy:  " << fv.cv_accuracy * 100.0 << "%\n";
    return 0;
}

int cmd_inspect(const std::string& results_path) {
    std::ifstream in(results_path);
    if (!in) throw ispso::Error("cannot open results file: " + results_path);
    const json j = json::parse(in);

    std::cout << j.at("dataset").get<std::string>() << " / "
              << j.at("variant").get<std::string>() << "\n";
    const json& agg = j.at("aggregate");
    std::cout << "  mean accuracy: " << agg.at("mean_accuracy").get<double>() * 100.0
              << "%  sd: " << agg.at("sd_accuracy").get<double>() * 100.0
              << "  mean subset: " << agg.at("mean_subset_size").get<double>() << "\n";
    std::cout << "  runs:\n";
    for (const json& r : j.at("runs")) {
        std::cout << "    seed " << r.at("seed").get<std::uint64_t>() << ": "
                  << r.at("accuracy").get<double>() * 100.0 << "%  features [";
        const auto sel = r.at("selected").get<std::vector<std::size_t>>();
        for (std::size_t i = 0; i < sel.size(); ++i) std::cout << (i ? "," : "") << sel[i];
        std::cout << "]\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ISPSO-GLOBAL wrapper feature selection"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs, jobs;
    std::optional<std::string> out_dir;
    CLI::App* run = app.add_subcommand("run", "run a full experiment from a JSON config");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--seed", seed, "override the base seed");
    run->add_option("--runs", runs, "override the number of runs per pair");
    run->add_option("--jobs", jobs, "worker thread limit");
    run->add_option("--out", out_dir, "output directory");

    std::string eval_path, eval_label = "class", eval_mask;
    bool eval_all = false, eval_norm = false;
    std::size_t eval_folds = 10, eval_k = 1;
    std::uint64_t eval_fold_seed = 1;
    CLI::App* eval = app.add_subcommand("eval", "evaluate one feature subset with CV kNN");
    eval->add_option("dataset", eval_path, "dataset CSV/TSV file")->required();
    eval->add_option("--label", eval_label, "label column name or index (default: class)");
    CLI::Option* mopt = eval->add_option("--mask", eval_mask, "1-based feature indices, e.g. 3,4");
    eval->add_flag("--all", eval_all, "use every feature")->excludes(mopt);
    eval->add_option("--folds", eval_folds, "CV fold count (default 10)");
    eval->add_option("--k", eval_k, "kNN neighbor count (default 1)");
    eval->add_flag("--normalize", eval_norm, "scale features to [-1,1] first");
    eval->add_option("--fold-seed", eval_fold_seed, "fold plan seed (default 1)");

    std::string inspect_path;
    CLI::App* inspect = app.add_subcommand("inspect", "pretty-print a results file");
    inspect->add_option("results", inspect_path, "a *.results.json file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, seed, runs, jobs, out_dir);
        if (eval->parsed()) {
            if (!eval_all && eval_mask.empty())
                throw ispso::Error("eval needs --mask or --all");
            return cmd_eval(eval_path, eval_label, eval_mask, eval_all, eval_folds, eval_k,
                            eval_norm, eval_fold_seed);
        }
        if (inspect->parsed()) return cmd_inspect(inspect_path);
    } catch (const ispso::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
