#include "mmit_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmit/mmit.hpp"

namespace mmit::cli {

namespace {

std::optional<std::size_t> parse_depth(const std::string& text) {
    if (text == "unlimited" || text == "none") return std::nullopt;
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("max depth must be a nonnegative integer or 'unlimited', got '" +
                                    text + "'");
    }
    return value;
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(file);
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

struct TreeFlags {
    std::string loss = "squared";
    double margin = 0.0;
    std::string max_depth = "unlimited";
    std::size_t min_samples_split = 2;
    double min_cost_decrease = 0.0;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--loss", loss, "Hinge loss: linear or squared")
            ->check(CLI::IsMember({"linear", "squared"}, CLI::ignore_case))
            ->capture_default_str();
        cmd.add_option("--margin", margin, "Margin hyperparameter (>= 0)")->capture_default_str();
        cmd.add_option("--max-depth", max_depth, "Maximum depth, or 'unlimited'")->capture_default_str();
        cmd.add_option("--min-samples-split", min_samples_split,
                       "Smallest leaf that may be split")
            ->capture_default_str();
        cmd.add_option("--min-cost-decrease", min_cost_decrease,
                       "Required cost reduction for a split")
            ->capture_default_str();
    }

    TreeParams params() const {
        TreeParams p;
        p.loss = parse_loss_kind(loss);
        p.margin = margin;
        p.max_depth = parse_depth(max_depth);
        p.min_samples_split = min_samples_split;
        p.min_cost_decrease = min_cost_decrease;
        p.validate();
        return p;
    }
};

struct TrainFlags {
    std::string data;
    std::string out;
    std::string learner = "mmit";
    TreeFlags tree;
};

void cmd_train(const TrainFlags& f, std::ostream& out) {
    const auto data = load_csv(f.data);
    if (data.size() == 0) throw std::invalid_argument("training data '" + f.data + "' has no rows");
    const auto params = f.tree.params();
    const bool cart = f.learner == "interval-cart";
    const Tree tree = cart ? interval_cart_fit(data, params) : fit(data, params);
    tree.save(f.out);

    const double cost = total_cost(tree, data, params);
    const double mse = interval_mse(tree.predict(data), data.targets());
    out << "n=" << data.size() << " p=" << data.n_features() << " depth=" << tree.depth()
        << " leaves=" << tree.n_leaves() << " cost=" << format_double(cost)
        << " mse=" << format_double(mse) << '\n';
}

struct PredictFlags {
    std::string model;
    std::string data;
    std::string out;
};

void cmd_predict(const PredictFlags& f, std::ostream& out) {
    const auto tree = Tree::load(f.model);
    const auto table = load_feature_csv(f.data);
    std::vector<double> predictions;
    predictions.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].size() != tree.n_features()) {
            throw std::invalid_argument("row " + std::to_string(i + 1) + ": model expects " +
                                        std::to_string(tree.n_features()) + " features, got " +
                                        std::to_string(table.rows[i].size()));
        }
        predictions.push_back(tree.predict(table.rows[i]));
    }
    emit(f.out, out, [&](std::ostream& s) {
        if (predictions.empty()) return;
        s << "prediction\n";
        for (double p : predictions) s << format_double(p) << '\n';
    });
}

struct EvaluateFlags {
    std::string data;
    std::string out;
    std::vector<std::string> families{"mmit-l", "mmit-s", "interval-cart", "constant"};
    std::size_t folds = 5;
    std::size_t inner_folds = 5;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::vector<double> margins;
    std::vector<std::string> depths;
    std::vector<std::size_t> min_samples_splits;
};

CVPlan make_plan(const EvaluateFlags& f) {
    CVPlan plan;
    plan.n_folds = f.folds;
    plan.inner_folds = f.inner_folds;
    plan.seed = f.seed;
    plan.threads = f.threads;
    if (!f.margins.empty() || !f.depths.empty() || !f.min_samples_splits.empty()) {
        // Any axis left unset keeps its default values.
        std::vector<double> margins = f.margins;
        std::vector<std::optional<std::size_t>> depths;
        std::vector<std::size_t> splits = f.min_samples_splits;
        for (const auto& d : f.depths) depths.push_back(parse_depth(d));
        const auto defaults = default_grid();
        for (const auto& p : defaults) {
            if (f.margins.empty() && std::find(margins.begin(), margins.end(), p.margin) == margins.end()) {
                margins.push_back(p.margin);
            }
            if (f.depths.empty() && std::find(depths.begin(), depths.end(), p.max_depth) == depths.end()) {
                depths.push_back(p.max_depth);
            }
            if (f.min_samples_splits.empty() &&
                std::find(splits.begin(), splits.end(), p.min_samples_split) == splits.end()) {
                splits.push_back(p.min_samples_split);
            }
        }
        plan.grid.clear();
        for (double m : margins) {
            for (const auto& d : depths) {
                for (std::size_t s : splits) {
                    TreeParams p;
                    p.margin = m;
                    p.max_depth = d;
                    p.min_samples_split = s;
                    p.validate();
                    plan.grid.push_back(p);
                }
            }
        }
    }
    plan.validate();
    return plan;
}

void cmd_evaluate(const EvaluateFlags& f, std::ostream& out, std::ostream& err) {
    std::vector<Learner> learners;
    for (const auto& name : f.families) learners.push_back(parse_learner(name));
    const auto plan = make_plan(f);
    const auto data = load_csv(f.data);

    std::vector<FoldResult> all;
    std::ostringstream summary;
    for (auto learner : learners) {
        const auto results = run_cv(data, plan, learner);
        summary << to_string(learner) << " mean_test_mse=" << format_double(mean_test_mse(results))
                << '\n';
        all.insert(all.end(), results.begin(), results.end());
    }
    emit(f.out, out, [&](std::ostream& s) { write_cv_report(s, all); });
    // The report owns stdout when no file is given.
    (f.out.empty() || f.out == "-" ? err : out) << summary.str();
}

struct SimulateFlags {
    std::string out;
    std::string pattern = "linear";
    SimSpec spec;
};

void cmd_simulate(SimulateFlags f, std::ostream& out) {
    f.spec.pattern = parse_sim_pattern(f.pattern);
    const auto data = simulate(f.spec);
    emit(f.out, out, [&](std::ostream& s) { write_csv(s, data); });
}

struct BenchFlags {
    std::string out;
    std::vector<std::size_t> sizes{1000, 10000, 100000};
    std::string loss = "linear";
    double margin = 0.0;
    std::uint64_t seed = 0;
    std::size_t repeats = 3;
};

void cmd_bench(const BenchFlags& f, std::ostream& out) {
    const auto kind = parse_loss_kind(f.loss);
    std::vector<BenchRow> rows;
    for (std::size_t n : f.sizes) rows.push_back(bench_size(n, kind, f.margin, f.seed, f.repeats));
    emit(f.out, out, [&](std::ostream& s) { write_bench_report(s, rows); });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Maximum margin interval trees"};
    app.name("mmit");
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML or INI file with default flag values");
    app.allow_config_extras(CLI::config_extras_mode::error);

    TrainFlags train;
    auto* train_cmd = app.add_subcommand("train", "Fit a tree and save it as JSON");
    train_cmd->add_option("--data", train.data, "Interval dataset CSV")->required();
    train_cmd->add_option("--out", train.out, "Model JSON path")->required();
    train_cmd->add_option("--learner", train.learner, "mmit or interval-cart")
        ->check(CLI::IsMember({"mmit", "interval-cart"}, CLI::ignore_case))
        ->capture_default_str();
    train.tree.add_to(*train_cmd);

    PredictFlags predict;
    auto* predict_cmd = app.add_subcommand("predict", "Predict with a saved tree");
    predict_cmd->add_option("--model", predict.model, "Model JSON path")->required();
    predict_cmd->add_option("--data", predict.data, "Feature CSV")->required();
    predict_cmd->add_option("--out", predict.out, "Predictions CSV (default: stdout)");

    EvaluateFlags evaluate;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Nested cross-validation report");
    evaluate_cmd->add_option("--data", evaluate.data, "Interval dataset CSV")->required();
    evaluate_cmd->add_option("--out", evaluate.out, "Report CSV (default: stdout)");
    evaluate_cmd->add_option("--families", evaluate.families, "mmit-l, mmit-s, interval-cart, constant")
        ->delimiter(',')
        ->capture_default_str();
    evaluate_cmd->add_option("--folds", evaluate.folds, "Outer folds (>= 2)")->capture_default_str();
    evaluate_cmd->add_option("--inner-folds", evaluate.inner_folds, "Inner folds (>= 2)")
        ->capture_default_str();
    evaluate_cmd->add_option("--seed", evaluate.seed, "Fold shuffle seed")->capture_default_str();
    evaluate_cmd->add_option("--threads", evaluate.threads, "Worker threads, 0 for all cores")
        ->envname("MMIT_THREADS")
        ->capture_default_str();
    evaluate_cmd->add_option("--margins", evaluate.margins, "Grid margins")->delimiter(',');
    evaluate_cmd->add_option("--depths", evaluate.depths, "Grid depths ('unlimited' allowed)")
        ->delimiter(',');
    evaluate_cmd->add_option("--min-samples-splits", evaluate.min_samples_splits,
                             "Grid min_samples_split values")
        ->delimiter(',');

    SimulateFlags sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Write a simulated interval dataset");
    simulate_cmd->add_option("--out", sim.out, "Dataset CSV (default: stdout)");
    simulate_cmd->add_option("--pattern", sim.pattern, "sin, abs or linear")
        ->check(CLI::IsMember({"sin", "abs", "linear"}, CLI::ignore_case))
        ->capture_default_str();
    simulate_cmd->add_option("--n", sim.spec.n, "Examples")->capture_default_str();
    simulate_cmd->add_option("--p", sim.spec.p, "Features")->capture_default_str();
    simulate_cmd->add_option("--seed", sim.spec.seed, "Random seed")->capture_default_str();
    simulate_cmd->add_option("--noise-sd", sim.spec.noise_shift_sd, "Center shift sd")
        ->capture_default_str();
    simulate_cmd->add_option("--width-min", sim.spec.width_range.first, "Smallest interval width")
        ->capture_default_str();
    simulate_cmd->add_option("--width-max", sim.spec.width_range.second, "Largest interval width")
        ->capture_default_str();
    simulate_cmd->add_option("--feature-min", sim.spec.feature_range.first, "Feature range start")
        ->capture_default_str();
    simulate_cmd->add_option("--feature-max", sim.spec.feature_range.second, "Feature range end")
        ->capture_default_str();

    BenchFlags bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time solver sweeps over synthetic limits");
    bench_cmd->add_option("--out", bench.out, "Timings CSV (default: stdout)");
    bench_cmd->add_option("--sizes", bench.sizes, "Numbers of limits")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--loss", bench.loss, "linear or squared")
        ->check(CLI::IsMember({"linear", "squared"}, CLI::ignore_case))
        ->capture_default_str();
    bench_cmd->add_option("--margin", bench.margin, "Margin")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Generator seed")->capture_default_str();
    bench_cmd->add_option("--repeats", bench.repeats, "Runs per size; the median is reported")
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*train_cmd) cmd_train(train, out);
        if (*predict_cmd) cmd_predict(predict, out);
        if (*evaluate_cmd) cmd_evaluate(evaluate, out, err);
        if (*simulate_cmd) cmd_simulate(sim, out);
        if (*bench_cmd) cmd_bench(bench, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace mmit::cli
