#include "scca/dataset.hpp"

#include "scca/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace scca {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        const auto cell = trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        cells.emplace_back(cell);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return cells;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_table(const std::string& path, char delim) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open '{}'", path));
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split_line(line, delim);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    if (!have_header) throw ParseError(fmt::format("'{}': empty file", path));
    return t;
}

double parse_cell(const std::string& path, const std::string& cell, long row, long col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
        throw ParseError(fmt::format("'{}': non-numeric cell '{}' at data row {}, column {}", path, cell, row, col),
                         row, col);
    return value;
}

Matrix to_matrix(const std::string& path, const CsvTable& t, std::optional<std::size_t> skip_col) {
    const std::size_t width = t.header.size();
    const Index cols = static_cast<Index>(width - (skip_col ? 1 : 0));
    Matrix m(static_cast<Index>(t.rows.size()), cols);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() != width)
            throw ParseError(fmt::format("'{}': data row {} has {} cells, header has {}", path, r + 1, row.size(), width),
                             static_cast<long>(r + 1));
        Index c_out = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (skip_col && c == *skip_col) continue;
            m(static_cast<Index>(r), c_out++) =
                parse_cell(path, row[c], static_cast<long>(r + 1), static_cast<long>(c + 1));
        }
    }
    return m;
}

void center_scale(Matrix& m, Vector& means, Vector& norms, ScalingMode mode, const std::vector<std::string>& names,
                  const char* side) {
    means = m.colwise().mean().transpose();
    m.rowwise() -= means.transpose();
    norms = m.colwise().norm().transpose();
    if (mode != ScalingMode::CenterUnitNorm) return;
    for (Index j = 0; j < m.cols(); ++j) {
        const double scale = std::max(1.0, std::abs(means[j])) * std::sqrt(static_cast<double>(m.rows()));
        if (!(norms[j] > 1e-13 * scale)) {
            const std::string name = j < static_cast<Index>(names.size()) ? names[j] : fmt::format("{}{}", side, j);
            throw DegenerateColumnError(fmt::format("constant column '{}' cannot be scaled to unit norm", name), name);
        }
        m.col(j) /= norms[j];
    }
}

}  // namespace

void RawDataset::validate() const {
    if (x.rows() != y.rows())
        throw DimensionError(fmt::format("X has {} rows but Y has {}", x.rows(), y.rows()));
    if (x.rows() < 2) throw DimensionError("at least two samples are required");
    if (x.cols() < 1 || y.cols() < 1) throw DimensionError("X and Y need at least one column each");
    if (!x.allFinite() || !y.allFinite()) throw DomainError("non-finite entries in data");
    if (!x_names.empty() && static_cast<Index>(x_names.size()) != x.cols())
        throw DimensionError("x_names length differs from column count");
    if (!y_names.empty() && static_cast<Index>(y_names.size()) != y.cols())
        throw DimensionError("y_names length differs from column count");
    if (strata && static_cast<Index>(strata->size()) != x.rows())
        throw DimensionError("strata length differs from sample count");
}

RawDataset load_csv(const std::string& path_x, const std::string& path_y, const CsvOptions& options) {
    const CsvTable tx = read_table(path_x, options.delimiter);
    const CsvTable ty = read_table(path_y, options.delimiter);
    if (tx.rows.empty() || ty.rows.empty())
        throw ParseError(fmt::format("'{}': no data rows", tx.rows.empty() ? path_x : path_y));
    if (tx.rows.size() != ty.rows.size())
        throw DimensionError(fmt::format("'{}' has {} data rows but '{}' has {}", path_x, tx.rows.size(), path_y,
                                         ty.rows.size()));

    RawDataset raw;
    std::optional<std::size_t> strata_col;
    if (options.strata_column) {
        const auto it = std::find(tx.header.begin(), tx.header.end(), *options.strata_column);
        if (it == tx.header.end())
            throw ParseError(fmt::format("'{}': no column named '{}'", path_x, *options.strata_column));
        strata_col = static_cast<std::size_t>(it - tx.header.begin());
        std::vector<std::string> labels;
        labels.reserve(tx.rows.size());
        for (const auto& row : tx.rows) labels.push_back(*strata_col < row.size() ? row[*strata_col] : "");
        raw.strata = std::move(labels);
    }
    raw.x = to_matrix(path_x, tx, strata_col);
    raw.y = to_matrix(path_y, ty, std::nullopt);
    for (std::size_t c = 0; c < tx.header.size(); ++c)
        if (!strata_col || c != *strata_col) raw.x_names.push_back(tx.header[c]);
    raw.y_names = ty.header;
    raw.validate();
    return raw;
}

void write_csv(const std::string& path, const Matrix& m, const std::vector<std::string>& names) {
    std::ofstream out(path);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path));
    for (Index j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << (j < static_cast<Index>(names.size()) ? names[j] : fmt::format("V{}", j + 1));
    }
    out << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << fmt::format("{:.17g}", m(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError(fmt::format("write failed for '{}'", path));
}

StandardizedDataset standardize(const Matrix& x, const Matrix& y, ScalingMode mode, std::vector<std::string> x_names,
                                std::vector<std::string> y_names) {
    if (x.rows() != y.rows()) throw DimensionError("X and Y row counts differ");
    if (x.rows() < 2) throw DimensionError("at least two samples are required");
    StandardizedDataset s;
    s.mode = mode;
    s.x = x;
    s.y = y;
    s.x_names = std::move(x_names);
    s.y_names = std::move(y_names);
    center_scale(s.x, s.x_means, s.x_norms, mode, s.x_names, "x");
    center_scale(s.y, s.y_means, s.y_norms, mode, s.y_names, "y");
    return s;
}

StandardizedDataset standardize(const RawDataset& raw, ScalingMode mode) {
    raw.validate();
    return standardize(raw.x, raw.y, mode, raw.x_names, raw.y_names);
}

std::pair<Matrix, Matrix> StandardizedDataset::transform(const Matrix& x_raw, const Matrix& y_raw) const {
    if (x_raw.cols() != p() || y_raw.cols() != q()) throw DimensionError("column counts differ from fitted data");
    Matrix xs = x_raw.rowwise() - x_means.transpose();
    Matrix ys = y_raw.rowwise() - y_means.transpose();
    if (mode == ScalingMode::CenterUnitNorm) {
        xs = xs.array().rowwise() / x_norms.transpose().array();
        ys = ys.array().rowwise() / y_norms.transpose().array();
    }
    return {std::move(xs), std::move(ys)};
}

std::pair<Matrix, Matrix> StandardizedDataset::destandardize() const {
    Matrix xr = x;
    Matrix yr = y;
    if (mode == ScalingMode::CenterUnitNorm) {
        xr = xr.array().rowwise() * x_norms.transpose().array();
        yr = yr.array().rowwise() * y_norms.transpose().array();
    }
    xr.rowwise() += x_means.transpose();
    yr.rowwise() += y_means.transpose();
    return {std::move(xr), std::move(yr)};
}

Matrix select_rows(const Matrix& m, const IndexList& idx) {
    Matrix out(static_cast<Index>(idx.size()), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = m.row(idx[i]);
    return out;
}

SplitPlan split_holdout(Index n, std::uint64_t seed) {
    if (n < 4) throw DimensionError(fmt::format("holdout split needs n >= 4, got {}", n));
    IndexList perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    const auto n_train = static_cast<std::size_t>(std::llround(0.5 * static_cast<double>(n)));
    const auto n_val = static_cast<std::size_t>(std::llround(0.25 * static_cast<double>(n)));
    SplitPlan plan;
    plan.seed = seed;
    plan.train_idx.assign(perm.begin(), perm.begin() + n_train);
    plan.val_idx.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
    plan.test_idx.assign(perm.begin() + n_train + n_val, perm.end());
    std::sort(plan.train_idx.begin(), plan.train_idx.end());
    std::sort(plan.val_idx.begin(), plan.val_idx.end());
    std::sort(plan.test_idx.begin(), plan.test_idx.end());
    return plan;
}

FoldPlan stratified_kfold(const std::vector<std::string>& strata, int k, std::uint64_t seed, bool stratify) {
    if (k < 2) throw DomainError("k-fold needs k >= 2");
    const auto n = static_cast<Index>(strata.size());
    std::map<std::string, IndexList> groups;
    for (Index i = 0; i < n; ++i) groups[stratify ? strata[static_cast<std::size_t>(i)] : std::string()].push_back(i);

    FoldPlan plan;
    plan.seed = seed;
    plan.stratified = stratify;
    plan.folds.assign(static_cast<std::size_t>(k), {});
    if (!stratify && n < k) throw DimensionError(fmt::format("{} samples cannot fill {} folds", n, k));

    std::mt19937_64 rng(seed);
    std::size_t next = 0;
    for (auto& [label, members] : groups) {
        if (static_cast<Index>(members.size()) < k)
            throw StratumError(fmt::format("stratum '{}' has {} members, fewer than k = {}", label, members.size(), k));
        std::shuffle(members.begin(), members.end(), rng);
        for (const Index i : members) {
            plan.folds[next].push_back(i);
            next = (next + 1) % static_cast<std::size_t>(k);
        }
    }
    for (auto& f : plan.folds) std::sort(f.begin(), f.end());
    return plan;
}

FoldPlan kfold(Index n, int k, std::uint64_t seed) {
    return stratified_kfold(std::vector<std::string>(static_cast<std::size_t>(n)), k, seed, false);
}

IndexList complement(Index n, const IndexList& exclude) {
    IndexList out;
    out.reserve(static_cast<std::size_t>(n) - exclude.size());
    std::size_t j = 0;
    for (Index i = 0; i < n; ++i) {
        while (j < exclude.size() && exclude[j] < i) ++j;
        if (j < exclude.size() && exclude[j] == i) continue;
        out.push_back(i);
    }
    return out;
}

}  // namespace scca
