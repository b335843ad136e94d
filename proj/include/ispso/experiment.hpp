#ifndef ISPSO_EXPERIMENT_HPP
#define ISPSO_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ispso/core.hpp"
#include "ispso/optimizer.hpp"

namespace ispso {

struct DatasetEntry {
    std::string name;
    std::string path;
    std::string label_column = "class";
    std::optional<double> r;  // per-dataset overrides of the seeding parameters
    std::optional<double> v;
};

/// A full experiment: datasets x variants, n_runs independent runs per pair.
struct ExperimentSpec {
    std::vector<DatasetEntry> datasets;
    std::vector<Variant> variants = {Variant::ispso_global};
    std::size_t n_runs = 20;
    std::uint64_t base_seed = 1;
    std::size_t jobs = 0;  // 0: hardware concurrency
    std::string out_dir = "results";
    std::vector<std::string> formats = {"text"};
    AlgorithmConfig base;
    std::optional<double> seeding_r;  // config-level overrides; unset: the
    std::optional<double> seeding_v;  // size-based default rule applies
    bool normalize_enabled = true;
};

/// Parses and validates a JSON experiment config. Unknown keys fail with the
/// offending dotted key name; domain violations name the key and the valid
/// range. Dataset paths/labels may come from an optional manifest file.
ExperimentSpec parse_spec(const std::string& path);

/// Effective per-(dataset,variant) algorithm configuration: per-dataset r/v
/// overrides beat config-level values, which beat the size-based rule
/// (r = 50 when n_samples > 500 else 1; v = 0.5).
AlgorithmConfig effective_config(const ExperimentSpec& spec, const DatasetEntry& entry,
                                 std::size_t n_samples, Variant variant);

struct ReportRow {
    std::string dataset;
    std::string variant;
    bool failed = false;
    std::string error;
    BatchAggregate aggregate;
    std::vector<std::size_t> best_features;  // 1-based, from the best run
    bool best_in_dataset = false;
};

struct ReportTable {
    std::vector<ReportRow> rows;
    bool all_ok() const;
};

/// Runs every (dataset, variant) pair, writes one machine-readable results
/// file and one timing sidecar per pair plus the summary tables, and returns
/// the assembled report. Pair failures are recorded, not fatal.
ReportTable execute(const ExperimentSpec& spec);

enum class TableFormat { text, delimited, markdown };

TableFormat table_format_from_string(const std::string& s);

std::string render_table(const ReportTable& table, TableFormat format);

/// Renders and writes the table to `path`.
void emit_table(const ReportTable& table, TableFormat format, const std::string& path);

}  // namespace ispso

#endif
