#pragma once

#include "scca/deflation.hpp"
#include "scca/metrics.hpp"
#include "scca/model_selection.hpp"
#include "scca/simplified.hpp"
#include "scca/standard.hpp"

#include <string>
#include <vector>

#include <json.hpp>

namespace scca::io {

using Json = nlohmann::json;

// Non-finite numbers (undefined scores, failed grid cells) become null.

Json to_json(const TuneReport& r);
Json to_json(const NestedCvReport& r);
Json to_json(const SelectionScores& s);
Json to_json(const GroupingBoundReport& r);
Json to_json(const SimplifiedFit& f);
Json to_json(const StandardFit& f);
Json to_json(const ComponentSequence& s);
Json to_json(const GridSpec& g);

/// Writes text, throwing IoError on failure.
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const Json& j);
std::string read_text(const std::string& path);

/// 17 significant digits; "NaN" / "inf" / "-inf" for non-finite values.
std::string format_double(double x);

/// Score grid with c1 down the rows and c2 across the columns.
void write_score_grid_csv(const std::string& path, const GridSpec& grid, const Matrix& scores);

/// index,name,weight rows.
void write_weights_csv(const std::string& path, const Vector& w, const std::vector<std::string>& names);
/// Reads the weight column back from write_weights_csv output.
Vector read_weights_csv(const std::string& path);

/// Header and rows of the selection-score table
/// (Model,Recall,Precision,F1,ACC,bACC,MCC,PR AUC,RAE); undefined scores print as NaN.
std::string selection_csv_header();
std::string selection_csv_row(const std::string& label, const SelectionScores& s);

}  // namespace scca::io
