#include "scca/report_io.hpp"

#include "scca/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace scca::io {

namespace {

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json vec(const Vector& v) {
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
    return a;
}

Json vec(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

// Row-major nested arrays.
Json mat(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (Index j = 0; j < m.cols(); ++j) r.push_back(num(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

Json pair_json(const CanonicalPair& p) { return Json{{"u", vec(p.u)}, {"v", vec(p.v)}, {"objective", num(p.objective)}}; }

Json side_json(const SideBoundReport& s) {
    Json j{{"applicable", s.applicable},
           {"l2_active", s.l2_active},
           {"alpha", num(s.alpha)},
           {"lambda", num(s.lambda)},
           {"scale", num(s.scale)},
           {"pairs_checked", s.pairs_checked},
           {"violations", s.violations},
           {"max_violation", num(s.max_violation)}};
    if (!s.reason.empty()) j["reason"] = s.reason;
    if (!s.bound_values.empty()) j["bound_values"] = vec(s.bound_values);
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

Json to_json(const GridSpec& g) {
    return Json{{"c1_values", vec(g.c1_values)},
                {"c2_values", vec(g.c2_values)},
                {"c1_min", num(g.range.c1_min)},
                {"c1_max", num(g.range.c1_max)},
                {"c2_min", num(g.range.c2_min)},
                {"c2_max", num(g.range.c2_max)}};
}

Json to_json(const TuneReport& r) {
    return Json{{"model", to_string(r.model)},
                {"metric", to_string(r.metric)},
                {"grid", to_json(r.grid)},
                {"scores", mat(r.scores)},
                {"cell_errors", r.cell_errors},
                {"selected", {{"c1", r.c1_opt}, {"c2", r.c2_opt}, {"i", r.i_opt}, {"j", r.j_opt}}},
                {"boundary_selected", r.boundary_selected},
                {"val_score", num(r.best_score)},
                {"fit_corr", num(r.fit_corr)},
                {"fit_cov", num(r.fit_cov)},
                {"test_corr", num(r.test_corr)},
                {"test_cov", num(r.test_cov)},
                {"test_cov_per_sample", num(r.test_cov_per_sample)},
                {"split",
                 {{"seed", r.split.seed},
                  {"n_train", r.split.train_idx.size()},
                  {"n_val", r.split.val_idx.size()},
                  {"n_test", r.split.test_idx.size()}}},
                {"refit", pair_json(r.refit)}};
}

Json to_json(const NestedCvReport& r) {
    Json folds = Json::array();
    for (const FoldReport& f : r.folds) {
        Json inner = Json::array();
        for (const Matrix& s : f.inner_scores) inner.push_back(mat(s));
        folds.push_back(Json{{"fold", f.fold + 1},
                             {"grid", to_json(f.grid)},
                             {"inner_scores", inner},
                             {"mean_scores", mat(f.mean_scores)},
                             {"selected", {{"c1", f.c1_opt}, {"c2", f.c2_opt}}},
                             {"val_score", num(f.best_mean_score)},
                             {"fit_corr", num(f.fit_corr)},
                             {"fit_cov", num(f.fit_cov)},
                             {"test_corr", num(f.test_corr)},
                             {"test_cov", num(f.test_cov)}});
    }
    return Json{{"model", to_string(r.model)},
                {"metric", to_string(r.metric)},
                {"seed", r.seed},
                {"folds", folds},
                {"modal", {{"c1", r.c1_modal}, {"c2", r.c2_modal}}},
                {"full_fit_corr", num(r.full_corr)},
                {"full_fit_cov", num(r.full_cov)},
                {"full_refit", pair_json(r.full_refit)}};
}

Json to_json(const SelectionScores& s) {
    auto opt = [](double x, bool defined) { return defined ? num(x) : Json(nullptr); };
    return Json{{"tp", s.confusion.tp},
                {"fp", s.confusion.fp},
                {"tn", s.confusion.tn},
                {"fn", s.confusion.fn},
                {"recall", opt(s.recall, s.recall_defined)},
                {"precision", opt(s.precision, s.precision_defined)},
                {"f1", num(s.f1)},
                {"acc", num(s.acc)},
                {"bacc", opt(s.bacc, s.bacc_defined)},
                {"mcc", opt(s.mcc, s.mcc_defined)},
                {"pr_auc", opt(s.pr_auc, s.pr_auc_defined)},
                {"rae", opt(s.rae, s.rae_defined)}};
}

Json to_json(const GroupingBoundReport& r) { return Json{{"u_side", side_json(r.u_side)}, {"v_side", side_json(r.v_side)}}; }

Json to_json(const SimplifiedFit& f) {
    return Json{{"model", "simplified"},
                {"objective", num(f.pair.objective)},
                {"objective_trace", vec(f.objective_trace)},
                {"iterations", f.iterations},
                {"converged", f.converged},
                {"degenerate", f.degenerate},
                {"init_fell_back", f.init_fell_back},
                {"small_c_warning", f.small_c_warning},
                {"l2_active_u", f.l2_active_u},
                {"l2_active_v", f.l2_active_v},
                {"alpha1", num(f.dual_alpha1)},
                {"lambda1", num(f.dual_lambda1)},
                {"alpha2", num(f.dual_alpha2)},
                {"lambda2", num(f.dual_lambda2)},
                {"u_case", to_string(f.u_case)},
                {"v_case", to_string(f.v_case)}};
}

Json to_json(const StandardFit& f) {
    return Json{{"model", "standard"},
                {"objective", num(f.pair.objective)},
                {"objective_trace", vec(f.objective_trace)},
                {"iterations", f.iterations},
                {"converged", f.converged},
                {"degenerate", f.degenerate},
                {"inner_iterations_total", f.inner_iterations_total},
                {"inner_nonconverged", f.inner_nonconverged},
                {"c_out_of_range", f.c_out_of_range},
                {"lipschitz_x", num(f.lipschitz_x)},
                {"lipschitz_y", num(f.lipschitz_y)}};
}

Json to_json(const ComponentSequence& s) {
    Json comps = Json::array();
    for (const CanonicalPair& p : s.components) comps.push_back(pair_json(p));
    Json j{{"model", to_string(s.model)},
           {"mode", to_string(s.mode)},
           {"d_values", vec(s.d_values)},
           {"components", comps},
           {"truncated", s.truncated}};
    if (s.truncated) j["truncation_reason"] = s.truncation_reason;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double x) {
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", x);
}

void write_score_grid_csv(const std::string& path, const GridSpec& grid, const Matrix& scores) {
    if (scores.rows() != static_cast<Index>(grid.c1_values.size()) || scores.cols() != static_cast<Index>(grid.c2_values.size()))
        throw DimensionError("write_score_grid_csv: score matrix does not match the grid");
    std::string s = "c1\\c2";
    for (double c2 : grid.c2_values) s += "," + format_double(c2);
    s += "\n";
    for (Index i = 0; i < scores.rows(); ++i) {
        s += format_double(grid.c1_values[static_cast<std::size_t>(i)]);
        for (Index j = 0; j < scores.cols(); ++j) s += "," + format_double(scores(i, j));
        s += "\n";
    }
    write_text(path, s);
}

void write_weights_csv(const std::string& path, const Vector& w, const std::vector<std::string>& names) {
    std::string s = "index,name,weight\n";
    for (Index i = 0; i < w.size(); ++i) {
        const std::string name = static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)] : fmt::format("var{}", i + 1);
        s += fmt::format("{},{},{}\n", i, csv_field(name), format_double(w[i]));
    }
    write_text(path, s);
}

Vector read_weights_csv(const std::string& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    std::vector<double> vals;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto pos = line.find_last_of(',');
        if (pos == std::string::npos) throw ParseError(fmt::format("'{}': row {} has no weight column", path, row), row);
        try {
            std::size_t used = 0;
            const std::string cell = line.substr(pos + 1);
            vals.push_back(std::stod(cell, &used));
        } catch (const std::exception&) {
            throw ParseError(fmt::format("'{}': row {} has a non-numeric weight", path, row), row, 3);
        }
    }
    return Eigen::Map<const Vector>(vals.data(), static_cast<Index>(vals.size()));
}

std::string selection_csv_header() { return "Model,Recall,Precision,F1,ACC,bACC,MCC,PR AUC,RAE\n"; }

std::string selection_csv_row(const std::string& label, const SelectionScores& s) {
    auto f = [](double x, bool defined) { return defined ? format_double(x) : std::string("NaN"); };
    return fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_field(label), f(s.recall, s.recall_defined),
                       f(s.precision, s.precision_defined), format_double(s.f1), format_double(s.acc),
                       f(s.bacc, s.bacc_defined), f(s.mcc, s.mcc_defined), f(s.pr_auc, s.pr_auc_defined),
                       f(s.rae, s.rae_defined));
}

}  // namespace scca::io
