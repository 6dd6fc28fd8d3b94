#include "scca/errors.hpp"
#include "scca/metrics.hpp"
#include "scca/report_io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <limits>

using namespace scca;

TEST_CASE("format_double") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(2.0) == "2");
    CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "NaN");
    CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("undefined scores serialize as null and NaN") {
    Vector truth(4);
    truth << 1, 0, 0, 0;
    const SelectionScores s = selection_scores(support_of(truth), Vector::Ones(4), truth);
    REQUIRE_FALSE(s.mcc_defined);
    const io::Json j = io::to_json(s);
    CHECK(j.at("mcc").is_null());
    CHECK(j.at("recall").get<double>() == 1.0);
    const std::string row = io::selection_csv_row("SCCA", s);
    CHECK(row.find(",NaN,") != std::string::npos);
    CHECK(io::selection_csv_header() == "Model,Recall,Precision,F1,ACC,bACC,MCC,PR AUC,RAE\n");
}

TEST_CASE("weights CSV round trip is exact") {
    std::mt19937_64 rng(1);
    const Vector w = testing::gaussian_vec(7, rng);
    const auto path = (std::filesystem::temp_directory_path() / "scca_w.csv").string();
    io::write_weights_csv(path, w, {"a", "b,c", "d"});
    CHECK(io::read_weights_csv(path) == w);
    CHECK(io::read_text(path).find("\"b,c\"") != std::string::npos);
    CHECK_THROWS_AS(io::read_weights_csv("/nonexistent/w.csv"), IoError);
}

TEST_CASE("score grid CSV shape") {
    GridSpec g;
    g.c1_values = {1, 2};
    g.c2_values = {0.5, 1, 2};
    Matrix s(2, 3);
    s << 0.1, 0.2, 0.3, 0.4, 0.5, -std::numeric_limits<double>::infinity();
    const auto path = (std::filesystem::temp_directory_path() / "scca_grid.csv").string();
    io::write_score_grid_csv(path, g, s);
    CHECK(io::read_text(path) == "c1\\c2,0.5,1,2\n1,0.10000000000000001,0.20000000000000001,0.29999999999999999\n"
                                 "2,0.40000000000000002,0.5,-inf\n");
    CHECK_THROWS_AS(io::write_score_grid_csv(path, g, Matrix::Zero(3, 3)), DimensionError);
    CHECK_THROWS_AS(io::write_text("/nonexistent/dir/x.txt", "x"), IoError);
}
