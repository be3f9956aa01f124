#include "uqlearn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uqlearn/errors.hpp"
#include "uqlearn/rng.hpp"

namespace uqlearn {

size_t LabeledDataset::count_label(int label) const {
    return static_cast<size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledDataset::validate() const {
    if (labels.empty()) throw ValidationError("dataset: at least one sample required");
    if (labels.size() != features.rows() || ids.size() != features.rows())
        throw ValidationError("dataset: label/id count does not match feature rows");
    for (int l : labels)
        if (l != 0 && l != 1) throw ValidationError("dataset: labels must be 0 or 1");
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_cell(const std::string& cell, const std::string& path, long line_no) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ParseError(path + ": non-numeric cell \"" + cell + "\"", line_no);
    return v;
}

// Shortest representation that round-trips exactly.
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

LabeledDataset take_rows(const LabeledDataset& ds, const std::vector<size_t>& rows) {
    LabeledDataset out;
    out.features = Matrix(rows.size(), ds.dim());
    out.labels.reserve(rows.size());
    out.ids.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        std::copy(ds.features.row(rows[i]).begin(), ds.features.row(rows[i]).end(),
                  out.features.row(i).begin());
        out.labels.push_back(ds.labels[rows[i]]);
        out.ids.push_back(ds.ids[rows[i]]);
    }
    return out;
}

} // namespace

LabeledDataset load_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError(path + ": missing header row", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_fields(line);
    if (header.size() < 3 || header.front() != "id" || header.back() != "label")
        throw ParseError(path + ": header must be id,f0,...,label", line_no);
    const size_t dim = header.size() - 2;
    for (size_t j = 0; j < dim; ++j)
        if (header[j + 1] != "f" + std::to_string(j))
            throw ParseError(path + ": expected feature column f" + std::to_string(j) +
                                 ", got \"" + header[j + 1] + "\"",
                             line_no);

    std::vector<double> values;
    LabeledDataset ds;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size())
            throw ParseError(path + ": ragged row with " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(header.size()),
                             line_no);
        ds.ids.push_back(fields.front());
        for (size_t j = 0; j < dim; ++j) values.push_back(parse_cell(fields[j + 1], path, line_no));
        const std::string& label_cell = fields.back();
        if (label_cell == "0") ds.labels.push_back(0);
        else if (label_cell == "1") ds.labels.push_back(1);
        else throw ParseError(path + ": label \"" + label_cell + "\" outside {0,1}", line_no);
    }
    if (ds.labels.empty()) throw ParseError(path + ": no data rows", line_no);
    ds.features = Matrix(ds.labels.size(), dim, std::move(values));
    ds.validate();
    return ds;
}

void save_feature_csv(const LabeledDataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");

    out << "id";
    for (size_t j = 0; j < ds.dim(); ++j) out << ",f" << j;
    out << ",label\n";
    for (size_t i = 0; i < ds.size(); ++i) {
        out << ds.ids[i];
        for (double v : ds.features.row(i)) out << ',' << format_double(v);
        out << ',' << ds.labels[i] << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, const SplitSpec& spec) {
    ds.validate();
    if (spec.test_fraction <= 0.0 || spec.test_fraction >= 1.0)
        throw ValidationError("split: test_fraction must lie in (0,1)");

    Rng rng(spec.seed);
    std::vector<size_t> test_rows, train_rows;

    auto partition = [&](std::vector<size_t> rows) {
        // Fisher-Yates on the fixed RNG, then round the test count.
        for (size_t i = rows.size(); i > 1; --i) {
            size_t j = rng.uniform_index(i);
            std::swap(rows[i - 1], rows[j]);
        }
        size_t n_test = static_cast<size_t>(
            std::llround(spec.test_fraction * static_cast<double>(rows.size())));
        n_test = std::min(n_test, rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            (i < n_test ? test_rows : train_rows).push_back(rows[i]);
    };

    if (spec.stratified) {
        std::vector<size_t> pos, neg;
        for (size_t i = 0; i < ds.size(); ++i) (ds.labels[i] == 1 ? pos : neg).push_back(i);
        if (pos.empty() || neg.empty())
            throw ValidationError("split: stratified mode needs both classes present");
        partition(std::move(pos));
        partition(std::move(neg));
    } else {
        std::vector<size_t> all(ds.size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = i;
        partition(std::move(all));
    }

    if (test_rows.empty() || train_rows.empty())
        throw ValidationError("split: fraction " + std::to_string(spec.test_fraction) +
                              " leaves a side empty");

    std::sort(test_rows.begin(), test_rows.end());
    std::sort(train_rows.begin(), train_rows.end());
    return {take_rows(ds, train_rows), take_rows(ds, test_rows)};
}

LabeledDataset synth_gaussian(size_t n_pos, size_t n_neg, size_t dim, double separation,
                              uint64_t seed) {
    if (n_pos < 1 || n_neg < 1 || dim < 1)
        throw ValidationError("synth_gaussian: counts and dim must be >= 1");
    if (separation < 0.0) throw ValidationError("synth_gaussian: separation must be >= 0");

    const double offset = 0.5 * separation / std::sqrt(static_cast<double>(dim));
    Rng rng(seed);
    LabeledDataset ds;
    ds.features = Matrix(n_pos + n_neg, dim);

    char id[32];
    for (size_t i = 0; i < n_pos + n_neg; ++i) {
        const bool positive = i < n_pos;
        const double mean = positive ? offset : -offset;
        for (size_t j = 0; j < dim; ++j) ds.features(i, j) = mean + rng.normal();
        ds.labels.push_back(positive ? 1 : 0);
        std::snprintf(id, sizeof(id), "%s%04zu", positive ? "pos" : "neg",
                      positive ? i : i - n_pos);
        ds.ids.emplace_back(id);
    }
    return ds;
}

} // namespace uqlearn
