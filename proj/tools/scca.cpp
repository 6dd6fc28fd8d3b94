// Command-line front end: simulate / fit / tune / evaluate / demo-grouping.

#include "scca/dataset.hpp"
#include "scca/deflation.hpp"
#include "scca/errors.hpp"
#include "scca/kernels.hpp"
#include "scca/metrics.hpp"
#include "scca/model_selection.hpp"
#include "scca/report_io.hpp"
#include "scca/synthgen.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace fs = std::filesystem;
using namespace scca;
using io::Json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kSolver = 2, kIo = 3 };

// Usage problems detected after parsing (bad combinations of flags).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string model = "simplified";
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string out = "out";

    // simulate / demo-grouping
    int setup = 2;
    long n = 1000;
    long p = 2000;
    long q = 100;
    long groups = 20;
    double group_size = 100.0;
    long informative = 5;
    double rho = 1.0;
    std::optional<long> support_x;
    std::optional<long> support_y;

    // fit / tune
    std::string x_path;
    std::string y_path;
    std::optional<std::string> strata_column;
    std::string scaling = "unit";
    std::optional<double> c1;
    std::optional<double> c2;
    int R = 1;
    std::string deflation = "crosscov";
    std::optional<double> grid_min;
    std::optional<double> grid_max;
    bool nested = false;
    int k_outer = 5;
    int k_inner = 5;
    std::optional<double> tol;
    std::optional<int> max_iter;
    bool warm_start = false;

    // evaluate
    std::string truth_path;
    std::vector<std::string> u_paths;
    std::vector<std::string> v_paths;
    std::vector<std::string> labels;
    double threshold = kSelectionThreshold;
};

template <class T>
Json opt_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json config_json(const RunConfig& c) {
    return Json{{"command", c.command},     {"model", c.model},
                {"seed", c.seed},           {"jobs", c.jobs},
                {"out", c.out},             {"setup", c.setup},
                {"n", c.n},                 {"p", c.p},
                {"q", c.q},                 {"groups", c.groups},
                {"group_size", c.group_size}, {"informative", c.informative},
                {"rho", c.rho},             {"support_x", opt_json(c.support_x)},
                {"support_y", opt_json(c.support_y)}, {"x", c.x_path},
                {"y", c.y_path},            {"strata_column", opt_json(c.strata_column)},
                {"scaling", c.scaling},     {"c1", opt_json(c.c1)},
                {"c2", opt_json(c.c2)},     {"R", c.R},
                {"deflation", c.deflation}, {"grid_min", opt_json(c.grid_min)},
                {"grid_max", opt_json(c.grid_max)}, {"nested", c.nested},
                {"k_outer", c.k_outer},     {"k_inner", c.k_inner},
                {"tol", opt_json(c.tol)},   {"max_iter", opt_json(c.max_iter)},
                {"warm_start", c.warm_start}, {"truth", c.truth_path},
                {"u", c.u_paths},           {"v", c.v_paths},
                {"labels", c.labels},       {"threshold", c.threshold}};
}

std::string out_path(const RunConfig& c, const std::string& name) { return (fs::path(c.out) / name).string(); }

void prepare_out(const RunConfig& c) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec || !fs::is_directory(c.out)) throw IoError("cannot create output directory '" + c.out + "'");
    io::write_json(out_path(c, "config.json"), config_json(c));
}

ScalingMode scaling_of(const RunConfig& c) { return c.scaling == "center" ? ScalingMode::CenterOnly : ScalingMode::CenterUnitNorm; }

TuneOptions tune_options(const RunConfig& c) {
    TuneOptions o;
    o.jobs = c.jobs;
    o.scaling = scaling_of(c);
    if (c.tol) {
        o.simplified.tol = *c.tol;
        o.standard.tol = *c.tol;
    }
    if (c.max_iter) {
        o.simplified.max_iter = *c.max_iter;
        o.standard.max_outer = *c.max_iter;
    }
    o.standard.warm_start = c.warm_start;
    o.standard.init_seed = c.seed;
    if (c.grid_min || c.grid_max) {
        if (!c.grid_min || !c.grid_max) throw UsageError("--grid-min and --grid-max must be given together");
        GridSpec g;
        g.range = CRange{*c.grid_min, *c.grid_max, *c.grid_min, *c.grid_max};
        g.c1_values = g.c2_values = build_grid(*c.grid_min, *c.grid_max);
        o.grid = g;
    }
    return o;
}

RawDataset load(const RunConfig& c) {
    if (c.x_path.empty() || c.y_path.empty()) throw UsageError("--x and --y are required");
    CsvOptions opts;
    opts.strata_column = c.strata_column;
    RawDataset raw = load_csv(c.x_path, c.y_path, opts);
    spdlog::info("loaded X {}x{}, Y {}x{}", raw.n(), raw.p(), raw.n(), raw.q());
    return raw;
}

SyntheticData simulate_data(const RunConfig& c) {
    if (c.setup == 1) {
        Setup1Params p;
        p.n = c.n;
        p.p = c.p;
        p.q = c.q;
        p.support_x = c.support_x;
        p.support_y = c.support_y;
        p.seed = c.seed;
        return gen_setup1(p);
    }
    Setup2Params p;
    p.n = c.n;
    p.groups = c.groups;
    p.mean_group_size = c.group_size;
    p.q = c.q;
    p.n_informative = c.informative;
    p.within_corr = c.rho;
    p.support_y = c.support_y;
    p.seed = c.seed;
    SyntheticData d = gen_setup2(p);
    if (d.truth.zero_draws > 0) spdlog::warn("{} group size draw(s) of 0 were redrawn", d.truth.zero_draws);
    return d;
}

void write_dataset(const RunConfig& c, const SyntheticData& d) {
    write_csv(out_path(c, "X.csv"), d.data.x, d.data.x_names);
    write_csv(out_path(c, "Y.csv"), d.data.y, d.data.y_names);
    io::write_text(out_path(c, "truth.json"), truth_to_json(d.truth) + "\n");
}

int cmd_simulate(const RunConfig& c) {
    prepare_out(c);
    const SyntheticData d = simulate_data(c);
    write_dataset(c, d);
    spdlog::info("setup {}: n={} p={} q={} sigma={:.6g}", c.setup, d.data.n(), d.data.p(), d.data.q(), d.truth.sigma);
    return kOk;
}

// Middle entry of the model's default grid, used when c1 / c2 are omitted.
std::pair<double, double> default_cs(Model model, const StandardizedDataset& d) {
    const GridSpec g = GridSpec::from_range(model == Model::Standard ? c_range_standard(d) : c_range_simplified(d));
    return {g.c1_values[g.c1_values.size() / 2], g.c2_values[g.c2_values.size() / 2]};
}

int cmd_fit(const RunConfig& c) {
    const Model model = model_from_string(c.model);
    if (c.R < 1) throw UsageError("--R must be at least 1");
    const RawDataset raw = load(c);
    prepare_out(c);
    const StandardizedDataset d = standardize(raw, scaling_of(c));
    auto [c1, c2] = default_cs(model, d);
    if (c.c1) c1 = *c.c1;
    if (c.c2) c2 = *c.c2;
    spdlog::info("fitting {} model at c1={} c2={}", c.model, c1, c2);
    const TuneOptions o = tune_options(c);

    if (c.R == 1) {
        Json diag;
        CanonicalPair pair;
        if (model == Model::Simplified) {
            SimplifiedFit f = fit_simplified(d, c1, c2, o.simplified);
            diag = io::to_json(f);
            diag["grouping_bounds"] = io::to_json(grouping_bound_check(f, d, c1, c2));
            pair = f.pair;
        } else {
            StandardFit f = fit_standard(d, c1, c2, o.standard);
            diag = io::to_json(f);
            pair = f.pair;
        }
        diag["c1"] = c1;
        diag["c2"] = c2;
        io::write_weights_csv(out_path(c, "weights_u.csv"), pair.u, d.x_names);
        io::write_weights_csv(out_path(c, "weights_v.csv"), pair.v, d.y_names);
        io::write_json(out_path(c, "diagnostics.json"), diag);
        return kOk;
    }

    const DeflationMode mode = c.deflation == "data" ? DeflationMode::Data : DeflationMode::CrossCov;
    DeflationOptions dopts;
    dopts.simplified = o.simplified;
    dopts.standard = o.standard;
    const ComponentSequence seq = model == Model::Simplified
                                      ? extract_components_simplified(d, c.R, {c1}, {c2}, mode, dopts)
                                      : extract_components_standard(d, c.R, {c1}, {c2}, mode, dopts);
    for (std::size_t r = 0; r < seq.components.size(); ++r) {
        io::write_weights_csv(out_path(c, fmt::format("weights_u_{}.csv", r + 1)), seq.components[r].u, d.x_names);
        io::write_weights_csv(out_path(c, fmt::format("weights_v_{}.csv", r + 1)), seq.components[r].v, d.y_names);
    }
    Json diag = io::to_json(seq);
    diag["c1"] = c1;
    diag["c2"] = c2;
    io::write_json(out_path(c, "diagnostics.json"), diag);
    if (seq.truncated) spdlog::warn("component extraction stopped early: {}", seq.truncation_reason);
    return kOk;
}

int cmd_tune(const RunConfig& c) {
    const Model model = model_from_string(c.model);
    const RawDataset raw = load(c);
    prepare_out(c);
    const TuneOptions o = tune_options(c);

    if (!c.nested) {
        const TuneReport rep = tune_holdout(raw, model, split_holdout(raw.n(), c.seed), o);
        io::write_json(out_path(c, "tune_report.json"), io::to_json(rep));
        io::write_score_grid_csv(out_path(c, "scores.csv"), rep.grid, rep.scores);
        io::write_weights_csv(out_path(c, "weights_u.csv"), rep.refit.u, raw.x_names);
        io::write_weights_csv(out_path(c, "weights_v.csv"), rep.refit.v, raw.y_names);
        spdlog::info("selected (c1, c2) = ({}, {}); test corr {:.4f}, test cov {:.4f}", rep.c1_opt, rep.c2_opt,
                     rep.test_corr, rep.test_cov);
        for (const auto& e : rep.cell_errors) spdlog::warn("grid cell {}", e);
        return kOk;
    }

    const NestedCvReport rep = nested_cv(raw, model, c.k_outer, c.k_inner, c.seed, o);
    io::write_json(out_path(c, "nested_report.json"), io::to_json(rep));
    const bool corr = rep.metric == Metric::Correlation;
    std::string csv = "Fold index,c1_opt,c2_opt,Cov@Val,Corr@Val,Cov,Corr,Test Cov,Test Corr\n";
    for (const FoldReport& f : rep.folds) {
        csv += fmt::format("Fold {},{},{},{},{},{},{},{},{}\n", f.fold + 1, io::format_double(f.c1_opt),
                           io::format_double(f.c2_opt), corr ? "---" : io::format_double(f.best_mean_score),
                           corr ? io::format_double(f.best_mean_score) : "---", io::format_double(f.fit_cov),
                           io::format_double(f.fit_corr), io::format_double(f.test_cov), io::format_double(f.test_corr));
    }
    csv += fmt::format("Full data,{},{},---,---,{},{},---,---\n", io::format_double(rep.c1_modal),
                       io::format_double(rep.c2_modal), io::format_double(rep.full_cov), io::format_double(rep.full_corr));
    io::write_text(out_path(c, "nested_summary.csv"), csv);
    io::write_weights_csv(out_path(c, "weights_u.csv"), rep.full_refit.u, raw.x_names);
    io::write_weights_csv(out_path(c, "weights_v.csv"), rep.full_refit.v, raw.y_names);
    return kOk;
}

int cmd_evaluate(const RunConfig& c) {
    if (c.truth_path.empty()) throw UsageError("--truth is required");
    if (c.u_paths.empty() && c.v_paths.empty()) throw UsageError("give at least one --u or --v weights file");
    const SyntheticTruth truth = truth_from_json(io::read_text(c.truth_path));
    prepare_out(c);

    auto label_of = [&](std::size_t i) { return i < c.labels.size() ? c.labels[i] : fmt::format("model{}", i + 1); };
    auto evaluate = [&](const std::vector<std::string>& paths, const Vector& truth_w, const std::string& stem) {
        if (paths.empty()) return;
        std::string csv = io::selection_csv_header();
        Json all = Json::array();
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const Vector w = io::read_weights_csv(paths[i]);
            if (w.size() != truth_w.size())
                throw DimensionError(fmt::format("'{}' holds {} weights, truth has {}", paths[i], w.size(), truth_w.size()));
            const SelectionScores s = selection_scores(support_of(truth_w), w, truth_w, c.threshold);
            csv += io::selection_csv_row(label_of(i), s);
            Json j = io::to_json(s);
            j["label"] = label_of(i);
            all.push_back(j);
        }
        io::write_text(out_path(c, stem + ".csv"), csv);
        io::write_json(out_path(c, stem + ".json"), all);
    };
    evaluate(c.u_paths, truth.c_weights, "selection_scores_x");
    evaluate(c.v_paths, truth.d_weights, "selection_scores_y");
    return kOk;
}

int cmd_demo_grouping(const RunConfig& base) {
    RunConfig c = base;
    c.setup = 2;
    prepare_out(c);
    const SyntheticData sim = simulate_data(c);
    write_dataset(c, sim);
    const TuneOptions o = tune_options(c);
    const SplitPlan split = split_holdout(sim.data.n(), c.seed);

    const TuneReport std_rep = tune_holdout(sim.data, Model::Standard, split, o);
    const TuneReport simp_rep = tune_holdout(sim.data, Model::Simplified, split, o);
    io::write_json(out_path(c, "tune_standard.json"), io::to_json(std_rep));
    io::write_json(out_path(c, "tune_simplified.json"), io::to_json(simp_rep));

    // Re-run the simplified refit to obtain its KKT multipliers for the bounds.
    IndexList tv = split.train_idx;
    tv.insert(tv.end(), split.val_idx.begin(), split.val_idx.end());
    std::sort(tv.begin(), tv.end());
    const StandardizedDataset tv_std =
        standardize(select_rows(sim.data.x, tv), select_rows(sim.data.y, tv), o.scaling, sim.data.x_names, sim.data.y_names);
    const SimplifiedFit simp = fit_simplified(tv_std, simp_rep.c1_opt, simp_rep.c2_opt, o.simplified);
    const GroupingBoundReport bounds = grouping_bound_check(simp, tv_std, simp_rep.c1_opt, simp_rep.c2_opt);
    Json bj = io::to_json(bounds);
    bj["c1"] = simp_rep.c1_opt;
    bj["c2"] = simp_rep.c2_opt;
    io::write_json(out_path(c, "grouping_bounds.json"), bj);

    const std::vector<Index> groups = sim.truth.x_groups();
    std::string stem_u = "index,name,group,truth,standard,simplified\n";
    for (Index i = 0; i < sim.data.p(); ++i)
        stem_u += fmt::format("{},{},{},{},{},{}\n", i, sim.data.x_names[static_cast<std::size_t>(i)], groups[static_cast<std::size_t>(i)],
                              io::format_double(sim.truth.c_weights[i]), io::format_double(std_rep.refit.u[i]),
                              io::format_double(simp.pair.u[i]));
    io::write_text(out_path(c, "stem_u.csv"), stem_u);
    std::string stem_v = "index,name,truth,standard,simplified\n";
    for (Index j = 0; j < sim.data.q(); ++j)
        stem_v += fmt::format("{},{},{},{},{}\n", j, sim.data.y_names[static_cast<std::size_t>(j)],
                              io::format_double(sim.truth.d_weights[j]), io::format_double(std_rep.refit.v[j]),
                              io::format_double(simp.pair.v[j]));
    io::write_text(out_path(c, "stem_v.csv"), stem_v);

    const auto gs_std = group_weight_stats(std_rep.refit.u, groups);
    const auto gs_simp = group_weight_stats(simp.pair.u, groups);
    const IndexList& informative = *sim.truth.informative_groups;
    std::string gcsv = "group,size,informative,standard_top1_share,standard_nonzeros,simplified_top1_share,simplified_spread\n";
    for (std::size_t g = 0; g < gs_std.size(); ++g) {
        const bool inf = std::find(informative.begin(), informative.end(), static_cast<Index>(g)) != informative.end();
        gcsv += fmt::format("{},{},{},{},{},{},{}\n", g, gs_std[g].size, inf ? 1 : 0, io::format_double(gs_std[g].top1_share),
                            gs_std[g].nonzeros, io::format_double(gs_simp[g].top1_share), io::format_double(gs_simp[g].spread));
    }
    io::write_text(out_path(c, "group_stats.csv"), gcsv);

    const long violations = bounds.u_side.violations + bounds.v_side.violations;
    spdlog::info("standard test corr {:.4f}, simplified test corr {:.4f}; bound violations: {}", std_rep.test_corr,
                 simp_rep.test_corr, violations);
    if (violations > 0) {
        spdlog::error("{} grouping bound violation(s)", violations);
        return kSolver;
    }
    return kOk;
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("scca");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SCCA_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    RunConfig cfg;
    CLI::App app{"Sparse CCA toolkit: standard and simplified models"};
    app.require_subcommand(1);
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "Worker threads (0 = logical cores)")->capture_default_str();
    app.add_option("--out", cfg.out, "Output directory")->capture_default_str();

    auto add_model = [&](CLI::App* sc) {
        sc->add_option("--model", cfg.model, "standard or simplified")
            ->check(CLI::IsMember({"standard", "simplified"}))
            ->capture_default_str();
    };
    auto add_data = [&](CLI::App* sc) {
        sc->add_option("--x", cfg.x_path, "CSV file with the X view (header row required)");
        sc->add_option("--y", cfg.y_path, "CSV file with the Y view (header row required)");
        sc->add_option("--strata-column", cfg.strata_column, "Column of X holding category labels");
        sc->add_option("--scaling", cfg.scaling, "unit (center + unit norm) or center")
            ->check(CLI::IsMember({"unit", "center"}))
            ->capture_default_str();
    };
    auto add_solver = [&](CLI::App* sc) {
        sc->add_option("--tol", cfg.tol, "Outer convergence tolerance");
        sc->add_option("--max-iter", cfg.max_iter, "Outer iteration cap");
        sc->add_flag("--warm-start", cfg.warm_start, "Carry ADMM auxiliary variables across outer iterations");
    };
    auto add_sim = [&](CLI::App* sc) {
        sc->add_option("--n", cfg.n, "Samples")->check(CLI::PositiveNumber)->capture_default_str();
        sc->add_option("--p", cfg.p, "X variables (setup 1)")->check(CLI::PositiveNumber)->capture_default_str();
        sc->add_option("--q", cfg.q, "Y variables")->check(CLI::PositiveNumber)->capture_default_str();
        sc->add_option("--groups", cfg.groups, "Number of groups (setup 2)")->check(CLI::PositiveNumber)->capture_default_str();
        sc->add_option("--group-size", cfg.group_size, "Mean group size (setup 2)")->check(CLI::PositiveNumber)->capture_default_str();
        sc->add_option("--informative", cfg.informative, "Informative groups (setup 2)")->check(CLI::PositiveNumber)->capture_default_str();
        sc->add_option("--rho", cfg.rho, "Within-group correlation (setup 2)")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        sc->add_option("--support-x", cfg.support_x, "Nonzeros of c (setup 1)");
        sc->add_option("--support-y", cfg.support_y, "Nonzeros of d");
    };

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset with its ground truth");
    sim->add_option("--setup", cfg.setup, "1 (uncorrelated) or 2 (grouped)")->check(CLI::IsMember({1, 2}))->capture_default_str();
    add_sim(sim);

    auto* fit = app.add_subcommand("fit", "Fit one or more canonical components");
    add_model(fit);
    add_data(fit);
    add_solver(fit);
    fit->add_option("--c1", cfg.c1, "L1 budget for u (default: middle of the grid)")->check(CLI::PositiveNumber);
    fit->add_option("--c2", cfg.c2, "L1 budget for v (default: middle of the grid)")->check(CLI::PositiveNumber);
    fit->add_option("--R", cfg.R, "Number of components")->check(CLI::PositiveNumber)->capture_default_str();
    fit->add_option("--deflation", cfg.deflation, "crosscov or data")->check(CLI::IsMember({"crosscov", "data"}))->capture_default_str();

    auto* tune = app.add_subcommand("tune", "Select (c1, c2) by holdout or nested cross-validation");
    add_model(tune);
    add_data(tune);
    add_solver(tune);
    tune->add_option("--grid-min", cfg.grid_min, "Override the lower grid end (both c1 and c2)")->check(CLI::PositiveNumber);
    tune->add_option("--grid-max", cfg.grid_max, "Override the upper grid end (both c1 and c2)")->check(CLI::PositiveNumber);
    tune->add_flag("--nested", cfg.nested, "Nested stratified cross-validation");
    tune->add_option("--k-outer", cfg.k_outer, "Outer folds")->check(CLI::Range(2, 1000))->capture_default_str();
    tune->add_option("--k-inner", cfg.k_inner, "Inner folds")->check(CLI::Range(2, 1000))->capture_default_str();

    auto* eval = app.add_subcommand("evaluate", "Score estimated weights against a truth sidecar");
    eval->add_option("--truth", cfg.truth_path, "truth.json written by simulate")->required();
    eval->add_option("--u", cfg.u_paths, "u weight files (repeatable)");
    eval->add_option("--v", cfg.v_paths, "v weight files (repeatable)");
    eval->add_option("--label", cfg.labels, "Row labels, one per weight file (repeatable)");
    eval->add_option("--threshold", cfg.threshold, "Selection threshold on |weight|")->capture_default_str();

    auto* demo = app.add_subcommand("demo-grouping", "Setup-2 data, both models tuned, grouping bounds checked");
    add_sim(demo);
    add_solver(demo);
    demo->add_option("--grid-min", cfg.grid_min, "Override the lower grid end")->check(CLI::PositiveNumber);
    demo->add_option("--grid-max", cfg.grid_max, "Override the upper grid end")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    kernels::set_threads(cfg.jobs);
    try {
        if (sim->parsed()) {
            cfg.command = "simulate";
            return cmd_simulate(cfg);
        }
        if (fit->parsed()) {
            cfg.command = "fit";
            return cmd_fit(cfg);
        }
        if (tune->parsed()) {
            cfg.command = "tune";
            return cmd_tune(cfg);
        }
        if (eval->parsed()) {
            cfg.command = "evaluate";
            return cmd_evaluate(cfg);
        }
        cfg.command = "demo-grouping";
        return cmd_demo_grouping(cfg);
    } catch (const UsageError& e) {
        spdlog::error("{}", e.what());
        return kUsage;
    } catch (const IoError& e) {
        spdlog::error("{}", e.what());
        return kIo;
    } catch (const ParseError& e) {
        spdlog::error("{}", e.what());
        return kIo;
    } catch (const SccaError& e) {
        spdlog::error("{}", e.what());
        return kSolver;
    } catch (const std::exception& e) {
        spdlog::error("unexpected failure: {}", e.what());
        return kSolver;
    }
}
