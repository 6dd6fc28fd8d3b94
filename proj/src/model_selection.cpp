#include "scca/model_selection.hpp"

#include "scca/errors.hpp"
#include "scca/kernels.hpp"
#include "scca/linalg.hpp"
#include "scca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>

#include <fmt/format.h>

namespace scca {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double l1_lower(const Matrix& d) {
    const double smax = linalg::top_singular(d).value;
    return std::max(1.0 / smax, 1.0 / linalg::row_max_norm(d));
}

double gram_ridge(const Matrix& d) { return 1e-8 * d.squaredNorm() / static_cast<double>(d.cols()); }

RawDataset take_rows(const RawDataset& raw, const IndexList& idx) {
    RawDataset out;
    out.x = select_rows(raw.x, idx);
    out.y = select_rows(raw.y, idx);
    out.x_names = raw.x_names;
    out.y_names = raw.y_names;
    if (raw.strata) {
        std::vector<std::string> s;
        s.reserve(idx.size());
        for (Index i : idx) s.push_back((*raw.strata)[static_cast<std::size_t>(i)]);
        out.strata = std::move(s);
    }
    return out;
}

IndexList merge_sorted(const IndexList& a, const IndexList& b) {
    IndexList out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

double score_of(Model model, const Matrix& x, const Matrix& y, const CanonicalPair& pair) {
    if (model == Model::Standard) return canonical_corr(x, y, pair.u, pair.v);
    return canonical_cov(x, y, pair.u, pair.v, CovScale::PerSample);
}

GridSpec grid_for(Model model, const StandardizedDataset& d, const TuneOptions& opts) {
    if (opts.grid) return *opts.grid;
    return GridSpec::from_range(model == Model::Standard ? c_range_standard(d) : c_range_simplified(d));
}

// Fit-set metrics (correlation and per-unit-weight covariance) of a refit pair.
void fit_metrics(const StandardizedDataset& d, const CanonicalPair& pair, double& corr, double& cov) {
    corr = canonical_corr(d.x, d.y, pair.u, pair.v);
    cov = canonical_cov(d.x, d.y, pair.u, pair.v, CovScale::Total);
}

std::vector<std::string> strata_or_single(const RawDataset& raw) {
    if (raw.strata) return *raw.strata;
    return std::vector<std::string>(static_cast<std::size_t>(raw.n()), "all");
}

}  // namespace

CRange c_range_standard(const StandardizedDataset& data) {
    const Matrix& x = data.x;
    const Matrix& y = data.y;
    if (!(x.size() > 0 && x.cwiseAbs().maxCoeff() > 0.0) || !(y.size() > 0 && y.cwiseAbs().maxCoeff() > 0.0))
        throw DegenerateError("c_range_standard: all-zero view");
    CRange r;
    r.c1_min = l1_lower(x);
    r.c2_min = l1_lower(y);

    // Whitened cross-product K = Ax' Ay with Ax = X (X'X + eI)^{-1/2}; its top
    // singular pair maps back through (X'X + eI)^{-1/2}, which the identity
    // (X'X + eI)^{-1/2} Ax' w = (X'X + eI)^{-1} X' w keeps in n-space.
    const double ex = gram_ridge(x);
    const double ey = gram_ridge(y);
    const Matrix ax = linalg::whitened_rows(x, ex);
    const Matrix ay = linalg::whitened_rows(y, ey);
    const linalg::SpectralResult top = linalg::top_singular(kernels::crossprod(ax, ay));
    Vector wy;
    Vector wx;
    kernels::gemv(ay, top.right, wy);
    kernels::gemv(ax, top.left, wx);
    r.c1_max = linalg::ridge_solve(x, wy / top.value, ex).lpNorm<1>();
    r.c2_max = linalg::ridge_solve(y, wx / top.value, ey).lpNorm<1>();
    r.c1_max = std::max(r.c1_max, r.c1_min);
    r.c2_max = std::max(r.c2_max, r.c2_min);
    return r;
}

CRange c_range_simplified(const StandardizedDataset& data) {
    const Matrix cross = kernels::crossprod(data.x, data.y);
    if (!(cross.size() > 0 && cross.cwiseAbs().maxCoeff() > 0.0)) throw DegenerateError("c_range_simplified: X'Y is zero");
    const linalg::SpectralResult top = linalg::top_singular(cross);
    CRange r;
    r.c1_min = 1.0;
    r.c2_min = 1.0;
    r.c1_max = std::max(1.0, top.left.lpNorm<1>());
    r.c2_max = std::max(1.0, top.right.lpNorm<1>());
    return r;
}

std::vector<double> build_grid(double c_min, double c_max) {
    if (!(c_min > 0.0) || !(c_max >= c_min) || !std::isfinite(c_max))
        throw DomainError(fmt::format("build_grid: invalid range [{}, {}]", c_min, c_max));
    const int lo = static_cast<int>(std::floor(std::log2(c_min)));
    const int hi = static_cast<int>(std::ceil(std::log2(c_max)));
    std::vector<double> out;
    for (int e = lo; e <= hi; ++e) out.push_back(std::ldexp(1.0, e));
    return out;
}

GridSpec GridSpec::from_range(const CRange& r) {
    GridSpec g;
    g.range = r;
    g.c1_values = build_grid(r.c1_min, r.c1_max);
    g.c2_values = build_grid(r.c2_min, r.c2_max);
    return g;
}

const char* to_string(Model m) { return m == Model::Standard ? "standard" : "simplified"; }
const char* to_string(Metric m) { return m == Metric::Correlation ? "correlation" : "covariance"; }

Model model_from_string(const std::string& s) {
    if (s == "standard") return Model::Standard;
    if (s == "simplified") return Model::Simplified;
    throw DomainError("unknown model '" + s + "' (expected standard or simplified)");
}

ModelFit fit_model(Model model, const StandardizedDataset& data, double c1, double c2, const TuneOptions& opts) {
    ModelFit out;
    if (model == Model::Standard) {
        StandardFit f = fit_standard(data, c1, c2, opts.standard);
        out.pair = std::move(f.pair);
        out.converged = f.converged;
        out.degenerate = f.degenerate;
        out.iterations = f.iterations;
    } else {
        SimplifiedFit f = fit_simplified(data, c1, c2, opts.simplified);
        out.pair = std::move(f.pair);
        out.converged = f.converged;
        out.degenerate = f.degenerate;
        out.iterations = f.iterations;
    }
    return out;
}

Matrix evaluate_grid(Model model, const StandardizedDataset& fit_data, const Matrix& x_val, const Matrix& y_val,
                     const GridSpec& grid, const TuneOptions& opts, std::vector<std::string>* errors) {
    const Index n1 = static_cast<Index>(grid.c1_values.size());
    const Index n2 = static_cast<Index>(grid.c2_values.size());
    Matrix scores = Matrix::Constant(n1, n2, kNegInf);
    std::vector<std::string> messages(static_cast<std::size_t>(n1 * n2));

    // Shared read-only pieces, built once for the whole grid.
    std::optional<StandardProblem> problem;
    Matrix cross;
    if (model == Model::Standard)
        problem.emplace(StandardProblem::from_data(fit_data));
    else
        cross = kernels::crossprod(fit_data.x, fit_data.y);

    const int jobs = opts.jobs > 0 ? opts.jobs : kernels::threads();
    const Index cells = n1 * n2;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (Index cell = 0; cell < cells; ++cell) {
        const Index i = cell / n2;
        const Index j = cell % n2;
        const double c1 = grid.c1_values[static_cast<std::size_t>(i)];
        const double c2 = grid.c2_values[static_cast<std::size_t>(j)];
        try {
            CanonicalPair pair;
            bool degenerate = false;
            if (model == Model::Standard) {
                StandardFit f = fit_standard(*problem, c1, c2, opts.standard);
                degenerate = f.degenerate;
                pair = std::move(f.pair);
            } else {
                SimplifiedFit f = fit_simplified_cross(cross, c1, c2, opts.simplified);
                degenerate = f.degenerate;
                pair = std::move(f.pair);
            }
            if (degenerate) {
                messages[static_cast<std::size_t>(cell)] = "degenerate fit";
            } else {
                scores(i, j) = score_of(model, x_val, y_val, pair);
            }
        } catch (const SccaError& e) {
            messages[static_cast<std::size_t>(cell)] = e.what();
        }
    }
    if (errors) {
        for (Index cell = 0; cell < cells; ++cell)
            if (!messages[static_cast<std::size_t>(cell)].empty())
                errors->push_back(fmt::format("{},{}: {}", cell / n2, cell % n2, messages[static_cast<std::size_t>(cell)]));
    }
    return scores;
}

std::pair<Index, Index> select_cell(const Matrix& scores) {
    if (scores.size() == 0) throw DimensionError("select_cell: empty score grid");
    Index bi = 0;
    Index bj = 0;
    for (Index i = 0; i < scores.rows(); ++i)
        for (Index j = 0; j < scores.cols(); ++j)
            if (scores(i, j) > scores(bi, bj)) {
                bi = i;
                bj = j;
            }
    return {bi, bj};
}

TuneReport tune_holdout(const RawDataset& raw, Model model, const SplitPlan& split, const TuneOptions& opts) {
    raw.validate();
    TuneReport rep;
    rep.model = model;
    rep.metric = model == Model::Standard ? Metric::Correlation : Metric::Covariance;
    rep.split = split;
    if (split.train_idx.empty() || split.val_idx.empty() || split.test_idx.empty())
        throw DimensionError("tune_holdout: every part of the split must be non-empty");

    const RawDataset train = take_rows(raw, split.train_idx);
    const StandardizedDataset train_std = standardize(train, opts.scaling);
    const auto [x_val, y_val] = train_std.transform(select_rows(raw.x, split.val_idx), select_rows(raw.y, split.val_idx));

    rep.grid = grid_for(model, train_std, opts);
    rep.scores = evaluate_grid(model, train_std, x_val, y_val, rep.grid, opts, &rep.cell_errors);
    const auto [bi, bj] = select_cell(rep.scores);
    rep.i_opt = bi;
    rep.j_opt = bj;
    rep.c1_opt = rep.grid.c1_values[static_cast<std::size_t>(bi)];
    rep.c2_opt = rep.grid.c2_values[static_cast<std::size_t>(bj)];
    rep.best_score = rep.scores(bi, bj);
    rep.boundary_selected = bi == 0 || bi == rep.scores.rows() - 1 || bj == 0 || bj == rep.scores.cols() - 1;
    if (!std::isfinite(rep.best_score)) throw DegenerateError("tune_holdout: every grid cell failed");

    const RawDataset trainval = take_rows(raw, merge_sorted(split.train_idx, split.val_idx));
    const StandardizedDataset tv_std = standardize(trainval, opts.scaling);
    ModelFit refit = fit_model(model, tv_std, rep.c1_opt, rep.c2_opt, opts);
    rep.refit = std::move(refit.pair);
    fit_metrics(tv_std, rep.refit, rep.fit_corr, rep.fit_cov);

    const auto [x_test, y_test] = tv_std.transform(select_rows(raw.x, split.test_idx), select_rows(raw.y, split.test_idx));
    rep.test_corr = canonical_corr(x_test, y_test, rep.refit.u, rep.refit.v);
    rep.test_cov = canonical_cov(x_test, y_test, rep.refit.u, rep.refit.v, CovScale::Total);
    rep.test_cov_per_sample = canonical_cov(x_test, y_test, rep.refit.u, rep.refit.v, CovScale::PerSample);
    return rep;
}

NestedCvReport nested_cv(const RawDataset& raw, Model model, int k_outer, int k_inner, std::uint64_t seed,
                         const TuneOptions& opts) {
    raw.validate();
    NestedCvReport rep;
    rep.model = model;
    rep.metric = model == Model::Standard ? Metric::Correlation : Metric::Covariance;
    rep.seed = seed;
    const bool stratify = raw.strata.has_value();
    rep.outer = stratified_kfold(strata_or_single(raw), k_outer, seed, stratify);

    std::map<std::pair<double, double>, int> votes;
    for (int f = 0; f < k_outer; ++f) {
        FoldReport fr;
        fr.fold = f;
        const IndexList& test_idx = rep.outer.folds[static_cast<std::size_t>(f)];
        const IndexList train_idx = complement(raw.n(), test_idx);
        const RawDataset outer_train = take_rows(raw, train_idx);
        const StandardizedDataset ot_std = standardize(outer_train, opts.scaling);
        fr.grid = grid_for(model, ot_std, opts);

        const FoldPlan inner = stratified_kfold(strata_or_single(outer_train), k_inner, seed + 1 + static_cast<std::uint64_t>(f), stratify);
        for (int k = 0; k < k_inner; ++k) {
            const IndexList& val_idx = inner.folds[static_cast<std::size_t>(k)];
            const IndexList fit_idx = complement(outer_train.n(), val_idx);
            const StandardizedDataset fit_std = standardize(take_rows(outer_train, fit_idx), opts.scaling);
            const auto [xv, yv] = fit_std.transform(select_rows(outer_train.x, val_idx), select_rows(outer_train.y, val_idx));
            fr.inner_scores.push_back(evaluate_grid(model, fit_std, xv, yv, fr.grid, opts));
        }
        fr.mean_scores = Matrix::Zero(fr.inner_scores.front().rows(), fr.inner_scores.front().cols());
        for (const Matrix& s : fr.inner_scores) fr.mean_scores += s;
        fr.mean_scores /= static_cast<double>(k_inner);

        const auto [bi, bj] = select_cell(fr.mean_scores);
        fr.c1_opt = fr.grid.c1_values[static_cast<std::size_t>(bi)];
        fr.c2_opt = fr.grid.c2_values[static_cast<std::size_t>(bj)];
        fr.best_mean_score = fr.mean_scores(bi, bj);
        if (!std::isfinite(fr.best_mean_score))
            throw DegenerateError(fmt::format("nested_cv: every grid cell failed in outer fold {}", f + 1));

        ModelFit refit = fit_model(model, ot_std, fr.c1_opt, fr.c2_opt, opts);
        fr.refit = std::move(refit.pair);
        fit_metrics(ot_std, fr.refit, fr.fit_corr, fr.fit_cov);
        const auto [xt, yt] = ot_std.transform(select_rows(raw.x, test_idx), select_rows(raw.y, test_idx));
        fr.test_corr = canonical_corr(xt, yt, fr.refit.u, fr.refit.v);
        fr.test_cov = canonical_cov(xt, yt, fr.refit.u, fr.refit.v, CovScale::Total);

        ++votes[{fr.c1_opt, fr.c2_opt}];
        rep.folds.push_back(std::move(fr));
    }

    // std::map iterates in ascending (c1, c2), so the first maximum is the
    // smallest pair among equally frequent ones.
    int best = -1;
    for (const auto& [pair, count] : votes)
        if (count > best) {
            best = count;
            rep.c1_modal = pair.first;
            rep.c2_modal = pair.second;
        }
    const StandardizedDataset all_std = standardize(raw, opts.scaling);
    ModelFit full = fit_model(model, all_std, rep.c1_modal, rep.c2_modal, opts);
    rep.full_refit = std::move(full.pair);
    fit_metrics(all_std, rep.full_refit, rep.full_corr, rep.full_cov);
    return rep;
}

}  // namespace scca
