#include "scca/metrics.hpp"

#include "scca/errors.hpp"
#include "scca/kernels.hpp"
#include "scca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace scca {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(double num, double den, bool& defined) {
    if (den == 0.0) {
        defined = false;
        return 0.0;
    }
    return num / den;
}

}  // namespace

double canonical_corr(const Matrix& x, const Matrix& y, const Vector& u, const Vector& v) {
    if (x.rows() != y.rows()) throw DimensionError("canonical_corr: X and Y differ in row count");
    Vector xu;
    Vector yv;
    kernels::gemv(x, u, xu);
    kernels::gemv(y, v, yv);
    const double nx = xu.norm();
    const double ny = yv.norm();
    if (!(nx > 0.0) || !(ny > 0.0)) throw DegenerateVariateError("canonical_corr: a canonical variate is zero");
    return xu.dot(yv) / (nx * ny);
}

double canonical_cov(const Matrix& x, const Matrix& y, const Vector& u, const Vector& v, CovScale scale) {
    if (x.rows() != y.rows()) throw DimensionError("canonical_cov: X and Y differ in row count");
    const double nu = u.norm();
    const double nv = v.norm();
    if (!(nu > 0.0) || !(nv > 0.0)) throw DomainError("canonical_cov: zero weight vector");
    Vector xu;
    Vector yv;
    kernels::gemv(x, u, xu);
    kernels::gemv(y, v, yv);
    double out = xu.dot(yv) / (nu * nv);
    if (scale == CovScale::PerSample) out /= static_cast<double>(x.rows());
    return out;
}

SelectionScores scores_from_confusion(const Confusion& c) {
    SelectionScores s;
    s.confusion = c;
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn);
    const double fn = static_cast<double>(c.fn);

    s.recall = ratio(tp, tp + fn, s.recall_defined);
    s.precision = ratio(tp, tp + fp, s.precision_defined);
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    const double total = tp + fp + tn + fn;
    s.acc = total > 0.0 ? (tp + tn) / total : 0.0;

    bool spec_defined = true;
    const double specificity = ratio(tn, tn + fp, spec_defined);
    s.bacc_defined = s.recall_defined && spec_defined;
    // One division of integer-valued terms, so the result is correctly rounded.
    s.bacc = s.bacc_defined ? (tp * (tn + fp) + tn * (tp + fn)) / (2.0 * (tp + fn) * (tn + fp))
                            : 0.5 * (s.recall + specificity);

    const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (den > 0.0) {
        s.mcc = (tp * tn - fp * fn) / std::sqrt(den);
    } else {
        s.mcc = kNaN;
        s.mcc_defined = false;
    }
    s.pr_auc = kNaN;
    s.pr_auc_defined = false;
    s.rae = kNaN;
    s.rae_defined = false;
    return s;
}

std::vector<bool> support_of(const Vector& w) {
    std::vector<bool> out(static_cast<std::size_t>(w.size()));
    for (Index i = 0; i < w.size(); ++i) out[static_cast<std::size_t>(i)] = w[i] != 0.0;
    return out;
}

double pr_auc(const std::vector<bool>& labels, const Vector& scores) {
    if (labels.size() != static_cast<std::size_t>(scores.size())) throw DimensionError("pr_auc: length mismatch");
    const long positives = std::count(labels.begin(), labels.end(), true);
    if (positives == 0) return kNaN;

    std::vector<Index> order(labels.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores[a] > scores[b]; });

    double area = 0.0;
    double prev_r = 0.0;
    double prev_p = 1.0;
    long tp = 0;
    long seen = 0;
    std::size_t k = 0;
    while (k < order.size()) {
        const double level = scores[order[k]];
        while (k < order.size() && scores[order[k]] == level) {
            tp += labels[static_cast<std::size_t>(order[k])] ? 1 : 0;
            ++seen;
            ++k;
        }
        const double r = static_cast<double>(tp) / static_cast<double>(positives);
        const double p = static_cast<double>(tp) / static_cast<double>(seen);
        area += 0.5 * (r - prev_r) * (p + prev_p);
        prev_r = r;
        prev_p = p;
    }
    return area;
}

double relative_absolute_error(const Vector& est, const Vector& truth) {
    if (est.size() != truth.size()) throw DimensionError("relative_absolute_error: length mismatch");
    const double denom = truth.lpNorm<1>();
    if (!(denom > 0.0)) return kNaN;
    Vector u = est;
    const double ne = est.norm();
    if (ne > 0.0) {
        u *= truth.norm() / ne;
        if (u.dot(truth) < 0.0) u = -u;
    }
    return (u - truth).lpNorm<1>() / denom;
}

SelectionScores selection_scores(const std::vector<bool>& true_support, const Vector& est, const Vector& true_weights,
                                 double threshold) {
    const auto m = true_support.size();
    if (m != static_cast<std::size_t>(est.size()) || m != static_cast<std::size_t>(true_weights.size()))
        throw DimensionError("selection_scores: length mismatch");
    if (!(threshold >= 0.0)) throw DomainError("selection_scores: threshold must be non-negative");
    Confusion c;
    for (std::size_t i = 0; i < m; ++i) {
        const bool sel = std::abs(est[static_cast<Index>(i)]) > threshold;
        if (true_support[i]) {
            sel ? ++c.tp : ++c.fn;
        } else {
            sel ? ++c.fp : ++c.tn;
        }
    }
    SelectionScores s = scores_from_confusion(c);
    s.pr_auc = pr_auc(true_support, est.cwiseAbs());
    s.pr_auc_defined = !std::isnan(s.pr_auc);
    s.rae = relative_absolute_error(est, true_weights);
    s.rae_defined = !std::isnan(s.rae);
    return s;
}

namespace {

// Checks one side: weights w on the columns of `own`, opposite view `other`
// with its budget c_other, KKT pair (alpha, lambda).
SideBoundReport check_side(const Vector& w, const Matrix& own, const Matrix& other, double c_other, bool l2_active,
                           double alpha, double lambda, bool keep_pairs) {
    SideBoundReport rep;
    rep.l2_active = l2_active;
    rep.alpha = alpha;
    rep.lambda = lambda;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    if (!l2_active) {
        rep.reason = "L2 constraint not strongly active";
        return rep;
    }
    rep.applicable = true;
    const double smax = linalg::top_singular(other).value;
    rep.scale = std::min(smax, c_other * linalg::row_max_norm(other)) / alpha;

    IndexList nz;
    for (Index i = 0; i < w.size(); ++i)
        if (w[i] != 0.0) nz.push_back(i);
    Matrix cols(own.rows(), static_cast<Index>(nz.size()));
    for (std::size_t k = 0; k < nz.size(); ++k) cols.col(static_cast<Index>(k)) = own.col(nz[k]);
    const Matrix corr = kernels::crossprod(cols, cols);
    const Vector norms = cols.colwise().norm().transpose();

    for (std::size_t a = 0; a < nz.size(); ++a) {
        for (std::size_t b = a + 1; b < nz.size(); ++b) {
            const double wi = w[nz[a]];
            const double wj = w[nz[b]];
            double r = corr(static_cast<Index>(a), static_cast<Index>(b)) / (norms[static_cast<Index>(a)] * norms[static_cast<Index>(b)]);
            r = std::clamp(r, -1.0, 1.0);
            double lhs;
            double rhs;
            if (wi * wj > 0.0) {
                lhs = std::abs(wi - wj);
                rhs = rep.scale * std::sqrt((1.0 - r) / 2.0);
            } else {
                lhs = std::abs(wi + wj);
                rhs = rep.scale * std::sqrt((1.0 + r) / 2.0);
            }
            ++rep.pairs_checked;
            const double viol = lhs - rhs;
            rep.max_violation = std::max(rep.max_violation, viol);
            if (viol > kBoundSlack) ++rep.violations;
            if (keep_pairs) rep.bound_values.push_back(rhs);
        }
    }
    return rep;
}

}  // namespace

GroupingBoundReport grouping_bound_check(const SimplifiedFit& fit, const StandardizedDataset& data, double c1,
                                         double c2, bool keep_pairs) {
    if (fit.pair.u.size() != data.p() || fit.pair.v.size() != data.q())
        throw DimensionError("grouping_bound_check: fit does not match the data");
    GroupingBoundReport rep;
    if (data.mode != ScalingMode::CenterUnitNorm) {
        rep.u_side.reason = rep.v_side.reason = "data columns are not scaled to unit norm";
        return rep;
    }
    rep.u_side = check_side(fit.pair.u, data.x, data.y, c2, fit.l2_active_u, fit.dual_alpha1, fit.dual_lambda1, keep_pairs);
    rep.v_side = check_side(fit.pair.v, data.y, data.x, c1, fit.l2_active_v, fit.dual_alpha2, fit.dual_lambda2, keep_pairs);
    return rep;
}

std::vector<GroupWeightStats> group_weight_stats(const Vector& w, const std::vector<Index>& groups) {
    if (groups.size() != static_cast<std::size_t>(w.size())) throw DimensionError("group_weight_stats: length mismatch");
    Index g_count = 0;
    for (Index g : groups) {
        if (g < 0) throw DomainError("group_weight_stats: negative group label");
        g_count = std::max(g_count, g + 1);
    }
    std::vector<GroupWeightStats> out(static_cast<std::size_t>(g_count));
    for (Index g = 0; g < g_count; ++g) {
        out[static_cast<std::size_t>(g)].group = g;
        out[static_cast<std::size_t>(g)].min_abs = std::numeric_limits<double>::infinity();
    }
    for (Index i = 0; i < w.size(); ++i) {
        auto& s = out[static_cast<std::size_t>(groups[static_cast<std::size_t>(i)])];
        const double a = std::abs(w[i]);
        ++s.size;
        s.l1 += a;
        s.max_abs = std::max(s.max_abs, a);
        s.min_abs = std::min(s.min_abs, a);
        if (a != 0.0) ++s.nonzeros;
    }
    for (auto& s : out) {
        if (s.size == 0) {
            s.min_abs = 0.0;
            continue;
        }
        s.mean_abs = s.l1 / static_cast<double>(s.size);
        s.top1_share = s.l1 > 0.0 ? s.max_abs / s.l1 : 0.0;
        s.spread = s.max_abs - s.min_abs;
    }
    return out;
}

}  // namespace scca
