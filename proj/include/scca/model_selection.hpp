#pragma once

#include "scca/dataset.hpp"
#include "scca/simplified.hpp"
#include "scca/standard.hpp"
#include "scca/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scca {

struct CRange {
    double c1_min = 0.0;
    double c1_max = 0.0;
    double c2_min = 0.0;
    double c2_max = 0.0;
};

/// Effective L1 ranges of the standard model. Lower ends from
/// max(1/sigma_max, 1/row_max_norm); upper ends from the L1 norm of the
/// unpenalized canonical weights (ridge 1e-8 * trace / dim on the Gram
/// matrices). Throws DegenerateError for an all-zero view.
CRange c_range_standard(const StandardizedDataset& data);

/// Simplified model: lower ends 1, upper ends the L1 norms of the leading
/// singular vectors of X'Y. Throws DegenerateError when X'Y = 0.
CRange c_range_simplified(const StandardizedDataset& data);

/// Powers of two from 2^floor(log2 c_min) to 2^ceil(log2 c_max).
/// Throws DomainError unless 0 < c_min <= c_max.
std::vector<double> build_grid(double c_min, double c_max);

struct GridSpec {
    std::vector<double> c1_values;
    std::vector<double> c2_values;
    CRange range;

    static GridSpec from_range(const CRange& r);
};

enum class Metric { Correlation, Covariance };

const char* to_string(Model m);
const char* to_string(Metric m);
Model model_from_string(const std::string& s);

struct TuneOptions {
    /// Worker threads for grid cells (< 1: all logical cores).
    int jobs = 0;
    SimplifiedOptions simplified;
    StandardOptions standard;
    ScalingMode scaling = ScalingMode::CenterUnitNorm;
    /// Replaces the computed grid when set.
    std::optional<GridSpec> grid;
};

/// Outcome of fitting either model once.
struct ModelFit {
    CanonicalPair pair;
    bool converged = false;
    bool degenerate = false;
    int iterations = 0;
};

ModelFit fit_model(Model model, const StandardizedDataset& data, double c1, double c2, const TuneOptions& opts);

struct TuneReport {
    Model model = Model::Simplified;
    Metric metric = Metric::Covariance;
    GridSpec grid;
    /// Validation scores, rows follow c1_values and columns c2_values. Failed
    /// cells hold -inf.
    Matrix scores;
    /// Messages for failed cells as "i,j: reason".
    std::vector<std::string> cell_errors;
    Index i_opt = 0;
    Index j_opt = 0;
    double c1_opt = 0.0;
    double c2_opt = 0.0;
    double best_score = 0.0;
    /// Selection sits on the first or last value of either axis.
    bool boundary_selected = false;

    /// Refit on train + validation.
    CanonicalPair refit;
    double fit_corr = 0.0;
    double fit_cov = 0.0;
    /// Held-out test metrics: correlation, covariance / (||u|| ||v||), and the
    /// same covariance divided by the number of test samples.
    double test_corr = 0.0;
    double test_cov = 0.0;
    double test_cov_per_sample = 0.0;
    SplitPlan split;
};

/// Grid search on the training rows scored on the validation rows, refit on
/// train + validation, evaluated on the test rows. Each subset used for fitting
/// is standardized on its own and held-out rows reuse its statistics.
TuneReport tune_holdout(const RawDataset& raw, Model model, const SplitPlan& split, const TuneOptions& opts = {});

/// Validation scores of every grid cell fitted on `fit_data` and scored on the
/// already-transformed held-out matrices.
Matrix evaluate_grid(Model model, const StandardizedDataset& fit_data, const Matrix& x_val, const Matrix& y_val,
                     const GridSpec& grid, const TuneOptions& opts, std::vector<std::string>* errors = nullptr);

/// Arg-max with ties resolved toward the smaller (c1, c2) in lexicographic order.
std::pair<Index, Index> select_cell(const Matrix& scores);

struct FoldReport {
    int fold = 0;
    GridSpec grid;
    /// Per inner fold validation scores, and their mean.
    std::vector<Matrix> inner_scores;
    Matrix mean_scores;
    double c1_opt = 0.0;
    double c2_opt = 0.0;
    double best_mean_score = 0.0;
    CanonicalPair refit;
    /// Outer-train fit metrics and outer-test metrics.
    double fit_corr = 0.0;
    double fit_cov = 0.0;
    double test_corr = 0.0;
    double test_cov = 0.0;
};

struct NestedCvReport {
    Model model = Model::Simplified;
    Metric metric = Metric::Covariance;
    std::vector<FoldReport> folds;
    double c1_modal = 0.0;
    double c2_modal = 0.0;
    CanonicalPair full_refit;
    double full_corr = 0.0;
    double full_cov = 0.0;
    FoldPlan outer;
    std::uint64_t seed = 0;
};

/// Stratified (by raw.strata when present) outer folds; inside each outer
/// training set an inner stratified k-fold mean selects (c1, c2); the final
/// model is refit on all rows at the most frequently selected pair.
NestedCvReport nested_cv(const RawDataset& raw, Model model, int k_outer, int k_inner, std::uint64_t seed,
                         const TuneOptions& opts = {});

}  // namespace scca
