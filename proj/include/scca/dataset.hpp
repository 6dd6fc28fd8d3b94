#pragma once

#include "scca/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scca {

/// Paired views X (n x p) and Y (n x q) of the same n samples.
struct RawDataset {
    Matrix x;
    Matrix y;
    std::vector<std::string> x_names;
    std::vector<std::string> y_names;
    std::optional<std::vector<std::string>> strata;

    Index n() const { return x.rows(); }
    Index p() const { return x.cols(); }
    Index q() const { return y.cols(); }

    /// Throws DimensionError / DomainError when an invariant is broken.
    void validate() const;
};

enum class ScalingMode { CenterOnly, CenterUnitNorm };

struct StandardizedDataset {
    Matrix x;
    Matrix y;
    ScalingMode mode = ScalingMode::CenterUnitNorm;
    Vector x_means, y_means;
    /// Euclidean norms of the centered columns. Recorded in both modes but only
    /// divided out under CenterUnitNorm.
    Vector x_norms, y_norms;
    std::vector<std::string> x_names;
    std::vector<std::string> y_names;

    Index n() const { return x.rows(); }
    Index p() const { return x.cols(); }
    Index q() const { return y.cols(); }

    /// Applies the stored means (and norms) to rows of fresh raw data.
    std::pair<Matrix, Matrix> transform(const Matrix& x_raw, const Matrix& y_raw) const;
    /// Inverse of the stored scaling applied to this dataset's matrices.
    std::pair<Matrix, Matrix> destandardize() const;
};

struct CsvOptions {
    char delimiter = ',';
    /// Column of the X file holding category labels instead of numbers. The
    /// column is removed from X and stored as the strata.
    std::optional<std::string> strata_column;
};

/// Reads X and Y from two CSV files with mandatory header rows.
RawDataset load_csv(const std::string& path_x, const std::string& path_y, const CsvOptions& options = {});

/// Writes a matrix as CSV with a header row, 17 significant digits.
void write_csv(const std::string& path, const Matrix& m, const std::vector<std::string>& names);

StandardizedDataset standardize(const RawDataset& raw, ScalingMode mode);
StandardizedDataset standardize(const Matrix& x, const Matrix& y, ScalingMode mode,
                                std::vector<std::string> x_names = {}, std::vector<std::string> y_names = {});

/// Rows of `m` listed in `idx`, in order.
Matrix select_rows(const Matrix& m, const IndexList& idx);

struct SplitPlan {
    IndexList train_idx;
    IndexList val_idx;
    IndexList test_idx;
    std::uint64_t seed = 0;
};

/// 50/25/25 split after a seeded shuffle. Throws DimensionError for n < 4.
SplitPlan split_holdout(Index n, std::uint64_t seed);

struct FoldPlan {
    std::vector<IndexList> folds;
    std::uint64_t seed = 0;
    bool stratified = false;
};

/// k folds with every stratum dealt round-robin after a seeded shuffle.
/// With `stratify` false all samples form one stratum.
FoldPlan stratified_kfold(const std::vector<std::string>& strata, int k, std::uint64_t seed, bool stratify = true);

/// Unstratified k-fold plan over n samples.
FoldPlan kfold(Index n, int k, std::uint64_t seed);

/// All indices in {0..n-1} not present in `exclude` (which must be sorted).
IndexList complement(Index n, const IndexList& exclude);

}  // namespace scca
