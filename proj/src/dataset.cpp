#include "ispso/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace ispso {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) out.push_back(cell);
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool is_index(const std::string& s, std::size_t& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    if (!std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
        return false;
    out = std::stoul(t);
    return true;
}

}  // namespace

Dataset load_dataset(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset file: " + path);

    std::string header_line;
    if (!std::getline(in, header_line)) throw Error("empty dataset file: " + path);
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();

    const char delim = header_line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> header = split_line(header_line, delim);
    for (auto& h : header) h = trim(h);

    std::size_t label_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == label_column) label_idx = i;
    if (label_idx == header.size()) {
        std::size_t idx;
        if (is_index(label_column, idx) && idx < header.size()) label_idx = idx;
    }
    if (label_idx == header.size())
        throw Error("label column '" + label_column + "' not found in " + path);

    Dataset d;
    d.name = path;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (i != label_idx) d.feature_names.push_back(header[i]);
    d.n_features = d.feature_names.size();
    if (d.n_features == 0) throw Error("dataset has no feature columns: " + path);

    std::unordered_map<std::string, int> class_ids;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++row;
        std::vector<std::string> cells = split_line(line, delim);
        if (cells.size() != header.size())
            throw Error(path + ": row " + std::to_string(row) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == label_idx) continue;
            double v;
            if (!parse_double(cells[i], v)) {
                const std::string cause = trim(cells[i]).empty() ? "missing value" : "non-numeric value '" + trim(cells[i]) + "'";
                throw Error(path + ": " + cause + " at row " + std::to_string(row) +
                            ", column '" + header[i] + "'");
            }
            d.values.push_back(v);
        }
        const std::string cls = trim(cells[label_idx]);
        if (cls.empty())
            throw Error(path + ": missing label at row " + std::to_string(row));
        auto [it, inserted] = class_ids.try_emplace(cls, static_cast<int>(d.class_names.size()));
        if (inserted) d.class_names.push_back(cls);
        d.labels.push_back(it->second);
    }

    d.n_samples = d.labels.size();
    if (d.n_samples == 0) throw Error("dataset has no data rows: " + path);
    if (d.n_classes() < 2) throw Error("dataset has a single class: " + path);
    return d;
}

Dataset normalize(const Dataset& d, double lower, double upper) {
    if (upper <= lower) throw Error("normalize: upper must exceed lower");
    if (d.n_samples == 0) throw Error("normalize: empty dataset");

    Dataset out = d;
    for (std::size_t j = 0; j < d.n_features; ++j) {
        double mn = d.at(0, j), mx = d.at(0, j);
        for (std::size_t i = 1; i < d.n_samples; ++i) {
            mn = std::min(mn, d.at(i, j));
            mx = std::max(mx, d.at(i, j));
        }
        for (std::size_t i = 0; i < d.n_samples; ++i) {
            double& v = out.values[i * d.n_features + j];
            v = mx > mn ? lower + (upper - lower) * (v - mn) / (mx - mn) : lower;
        }
    }
    return out;
}

FoldPlan stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error("stratified_kfold: k must be at least 2");
    if (k > d.n_samples) throw Error("stratified_kfold: k exceeds sample count");

    // Per-class Fisher-Yates shuffle, then a single round-robin deal whose
    // fold cursor carries across classes: fold sizes stay within one of each
    // other overall and within each class.
    Rng rng(seed);
    FoldPlan plan;
    plan.k = k;
    plan.assignment.assign(d.n_samples, 0);

    std::size_t cursor = 0;
    for (std::size_t c = 0; c < d.n_classes(); ++c) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < d.n_samples; ++i)
            if (d.labels[i] == static_cast<int>(c)) rows.push_back(i);
        for (std::size_t i = rows.size(); i > 1; --i)
            std::swap(rows[i - 1], rows[rng.next_index(i)]);
        for (std::size_t r : rows) {
            plan.assignment[r] = cursor % k;
            ++cursor;
        }
    }
    return plan;
}

Dataset project(const Dataset& d, const FeatureMask& mask) {
    if (mask.size() != d.n_features) throw Error("project: mask length mismatch");
    if (!mask.any()) throw Error("project: mask selects no features");

    const std::vector<std::size_t> cols = mask.selected();
    Dataset out;
    out.name = d.name;
    out.labels = d.labels;
    out.class_names = d.class_names;
    out.n_samples = d.n_samples;
    out.n_features = cols.size();
    out.feature_names.reserve(cols.size());
    for (std::size_t c : cols) out.feature_names.push_back(d.feature_names[c]);
    out.values.reserve(d.n_samples * cols.size());
    for (std::size_t i = 0; i < d.n_samples; ++i)
        for (std::size_t c : cols) out.values.push_back(d.at(i, c));
    return out;
}

}  // namespace ispso
