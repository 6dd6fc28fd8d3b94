#pragma once

#include "scca/dataset.hpp"
#include "scca/simplified.hpp"
#include "scca/types.hpp"

#include <string>
#include <vector>

namespace scca {

/// <Xu, Yv> / (||Xu|| ||Yv||). Throws DegenerateVariateError when either
/// variate is zero.
double canonical_corr(const Matrix& x, const Matrix& y, const Vector& u, const Vector& v);

enum class CovScale {
    /// <Xu, Yv> / (n ||u|| ||v||), the validation criterion.
    PerSample,
    /// <Xu, Yv> / (||u|| ||v||), as reported on test data.
    Total,
};

/// Throws DomainError when u or v is zero.
double canonical_cov(const Matrix& x, const Matrix& y, const Vector& u, const Vector& v,
                     CovScale scale = CovScale::PerSample);

struct Confusion {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;
};

/// Variable-selection quality of an estimated weight vector. Scores whose
/// denominators vanish are set to 0 (NaN for mcc, rae) and flagged.
struct SelectionScores {
    Confusion confusion;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    double acc = 0.0;
    double bacc = 0.0;
    double mcc = 0.0;
    double pr_auc = 0.0;
    double rae = 0.0;
    bool recall_defined = true;
    bool precision_defined = true;
    bool bacc_defined = true;
    bool mcc_defined = true;
    bool pr_auc_defined = true;
    bool rae_defined = true;
};

inline constexpr double kSelectionThreshold = 1e-8;

/// recall, precision, f1, acc, bacc and mcc from confusion counts alone.
SelectionScores scores_from_confusion(const Confusion& c);

/// Full score set: selection is |est| > threshold; PR AUC ranks |est| with
/// tied scores entered together and trapezoids from (recall 0, precision 1);
/// RAE rescales est to ||true||_2 and aligns its sign with the truth first
/// (an all-zero estimate is used unscaled, giving RAE = 1).
SelectionScores selection_scores(const std::vector<bool>& true_support, const Vector& est, const Vector& true_weights,
                                 double threshold = kSelectionThreshold);

/// Nonzero pattern of a weight vector.
std::vector<bool> support_of(const Vector& w);

/// Area under the precision-recall curve of scores against labels.
/// Returns NaN when there are no positive labels.
double pr_auc(const std::vector<bool>& labels, const Vector& scores);

/// Sign-aligned, norm-matched relative absolute error ||u_hat - u*||_1 / ||u*||_1.
double relative_absolute_error(const Vector& est, const Vector& truth);

struct SideBoundReport {
    bool applicable = false;
    std::string reason;
    bool l2_active = false;
    double alpha = 0.0;
    double lambda = 0.0;
    /// min(sigma_max, c * row_max_norm) / alpha of the opposite view.
    double scale = 0.0;
    long pairs_checked = 0;
    long violations = 0;
    /// Largest lhs - rhs over all checked pairs (<= 0 when every bound holds);
    /// -inf when no pair was checked.
    double max_violation = 0.0;
    /// rhs of every checked pair in (i < j) order, filled with keep_pairs.
    std::vector<double> bound_values;
};

struct GroupingBoundReport {
    SideBoundReport u_side;
    SideBoundReport v_side;
};

/// Absolute slack allowed before a pair counts as a violation.
inline constexpr double kBoundSlack = 1e-9;

/// Evaluates the pairwise grouping bounds of a simplified fit:
///   u_i u_j > 0: |u_i - u_j| <= B sqrt((1 - r_ij)/2)
///   u_i u_j < 0: |u_i + u_j| <= B sqrt((1 + r_ij)/2)
/// with B = min(sigma_max(Y), c2 * row_max_norm(Y)) / alpha_1, and the mirror
/// image for v. A side whose L2 constraint is not strongly active, or data
/// not scaled to unit-norm columns, yields applicable = false.
GroupingBoundReport grouping_bound_check(const SimplifiedFit& fit, const StandardizedDataset& data, double c1,
                                         double c2, bool keep_pairs = false);

/// Weight concentration inside one group of variables.
struct GroupWeightStats {
    Index group = 0;
    Index size = 0;
    double l1 = 0.0;
    double max_abs = 0.0;
    double min_abs = 0.0;
    double mean_abs = 0.0;
    /// max_abs / l1 (0 for an all-zero group).
    double top1_share = 0.0;
    /// max_abs - min_abs.
    double spread = 0.0;
    Index nonzeros = 0;
};

/// One entry per group label in `groups` (labels 0..G-1, one per variable).
std::vector<GroupWeightStats> group_weight_stats(const Vector& w, const std::vector<Index>& groups);

}  // namespace scca
