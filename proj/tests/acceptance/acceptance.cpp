// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmit/mmit.hpp"
#include "mmit_cli/cli.hpp"
#include "support/oracle.hpp"

using namespace mmit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

// Largest move count seen in any linear insertion, shared by criteria 1, 3 and 5.
std::size_t g_linear_max_moves = 0;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void track(const HingeSolver& s) {
    if (s.kind() == LossKind::Linear) {
        g_linear_max_moves = std::max(g_linear_max_moves, s.last_insert_moves());
    }
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len(1, 500);
    const double margins[] = {0.0, 0.5, 1.0, 2.0};
    std::size_t checked = 0;
    double worst = 0.0;
    for (int seq = 0; seq < 1000; ++seq) {
        const auto kind = seq % 2 ? LossKind::Linear : LossKind::Squared;
        const double margin = margins[(seq / 2) % 4];
        const auto terms = oracle::random_terms(rng, len(rng), kind, margin, seq % 3 == 0);
        HingeSolver s(kind, margin);
        std::vector<HingeTerm> prefix;
        for (const auto& t : terms) {
            const auto r = s.insert(t);
            track(s);
            prefix.push_back(t);
            const double want = oracle::brute_min(prefix);
            worst = std::max(worst, std::abs(r.min_value - want) / std::max(1.0, std::abs(want)));
            if (!oracle::close(r.min_value, want)) {
                return {false, "sequence " + std::to_string(seq) + " prefix " +
                                   std::to_string(prefix.size()) + ": got " + fmt(r.min_value) +
                                   ", oracle " + fmt(want)};
            }
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " prefixes, worst relative error " + fmt(worst)};
}

Outcome figure_trace() {
    HingeSolver s(LossKind::Linear, 1.0);
    s.insert({+1, 4.0, 1.0, LossKind::Linear});
    track(s);
    const auto first = s.breakpoints();
    const auto moves1 = s.last_insert_moves();
    const auto r = s.insert({-1, 1.0, 1.0, LossKind::Linear});
    track(s);
    const auto moves2 = s.last_insert_moves();
    const auto bps = s.breakpoints();
    const bool ok = first.size() == 1 && first[0].position == 3.0 &&
                    first[0].diff == PieceCoefficients{0.0, 1.0, -3.0} && bps.size() == 2 &&
                    bps[0].position == 2.0 && bps[0].diff == PieceCoefficients{0.0, 1.0, -2.0} &&
                    bps[1].position == 3.0 && bps[1].diff == PieceCoefficients{0.0, 1.0, -3.0} &&
                    moves1 == 1 && moves2 == 0 && r.min_value == 0.0 && r.argmin_lo == 2.0 &&
                    r.argmin_hi == 3.0;
    return {ok, "moves " + std::to_string(moves1) + "," + std::to_string(moves2) + "; min " +
                    fmt(r.min_value) + " on [" + fmt(r.argmin_lo) + ", " + fmt(r.argmin_hi) + "]"};
}

Outcome squared_moves() {
    std::vector<double> means;
    std::string detail;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        const auto terms = dataset_terms(generate_bench_limits(n, 7), 0.0, LossKind::Squared);
        const auto stats = run_solver_sweep(terms, LossKind::Squared, 0.0);
        means.push_back(stats.mean_moves());
        detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + ": " +
                  fmt(stats.mean_moves());
    }
    return {means.back() <= 2.0 * means.front(), "mean moves " + detail};
}

Outcome timing() {
    const auto small = bench_size(100000, LossKind::Linear, 1.0, 11, 5);
    const auto large = bench_size(1000000, LossKind::Linear, 1.0, 11, 5);
    g_linear_max_moves = std::max({g_linear_max_moves, small.stats.max_moves_per_insert,
                                   large.stats.max_moves_per_insert});
    const double ratio = large.stats.seconds / small.stats.seconds;
    return {ratio <= 15.0, "1e5: " + fmt(small.stats.seconds) + " s, 1e6: " +
                               fmt(large.stats.seconds) + " s, ratio " + fmt(ratio)};
}

Outcome linear_bound() {
    // Bench runs at the CLI's sizes and margins, on top of the sequences above.
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        for (double margin : {0.0, 1.0}) {
            const auto terms = dataset_terms(generate_bench_limits(n, 3), margin, LossKind::Linear);
            const auto stats = run_solver_sweep(terms, LossKind::Linear, margin);
            g_linear_max_moves = std::max(g_linear_max_moves, stats.max_moves_per_insert);
        }
    }
    return {g_linear_max_moves <= 1,
            "largest moves in one linear insertion: " + std::to_string(g_linear_max_moves)};
}

Outcome split_equivalence() {
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<std::size_t> n_dist(2, 50), p_dist(1, 4);
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = oracle::random_dataset(rng, n_dist(rng), p_dist(rng));
        const auto kind = trial % 2 ? LossKind::Linear : LossKind::Squared;
        const double margin = (trial % 4) * 0.5;
        std::vector<std::size_t> rows(d.size());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        // An infinite unsplit cost makes best_split report the minimum candidate.
        const auto got = best_split(d, rows, kind, margin, kInf);
        const auto want = oracle::exhaustive_split_cost(d, kind, margin);
        if (got.has_value() != want.has_value()) {
            return {false, "dataset " + std::to_string(trial) + ": split existence differs"};
        }
        if (!got) continue;
        if (!oracle::close(got->total_cost, *want)) {
            return {false, "dataset " + std::to_string(trial) + ": got " + fmt(got->total_cost) +
                               ", exhaustive " + fmt(*want)};
        }
        ++compared;
    }
    return {true, std::to_string(compared) + " of 200 datasets had a split; all costs match"};
}

Outcome recovery() {
    std::string detail;
    bool ok = true;
    for (auto pattern : {SimPattern::Sin, SimPattern::Abs}) {
        SimSpec spec;
        spec.pattern = pattern;
        spec.n = 200;
        spec.p = 20;
        spec.seed = 1;
        const auto data = simulate(spec);
        CVPlan plan;
        plan.seed = 1;
        plan.threads = 0;
        const double constant = mean_test_mse(run_cv(data, plan, Learner::Constant));
        const double cart = mean_test_mse(run_cv(data, plan, Learner::IntervalCart));
        detail += std::string(to_string(pattern)) + ": constant " + fmt(constant) + ", cart " +
                  fmt(cart);
        for (auto learner : {Learner::MmitLinear, Learner::MmitSquared}) {
            const double m = mean_test_mse(run_cv(data, plan, learner));
            ok = ok && m < constant && (m < cart || m <= 1.2 * cart);
            detail += ", " + std::string(to_string(learner)) + " " + fmt(m);
        }
        detail += "; ";
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Outcome metric_consistency() {
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = oracle::random_dataset(rng, 1 + trial % 50, 2);
        const auto targets = d.targets();
        const double n = static_cast<double>(d.size());
        for (double h : {u(rng), constant_baseline(d).prediction}) {
            const double mse = interval_mse(std::vector<double>(d.size(), h), targets);
            const double cost = hinge_cost(targets, h, 0.0, LossKind::Squared);
            if (!oracle::close(n * mse, cost)) {
                return {false, "dataset " + std::to_string(trial) + ": n*mse " + fmt(n * mse) +
                                   " vs cost " + fmt(cost)};
            }
        }
    }
    return {true, "100 datasets, random and optimal constants"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const auto dir = fs::temp_directory_path() / "mmit_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto p = [&](const std::string& name) { return (dir / name).string(); };
    std::ostringstream sink;
    int failures = 0;
    const auto run = [&](std::vector<std::string> args) {
        failures += mmit::cli::run(args, sink, sink) != 0;
    };
    for (const std::string tag : {"1", "2"}) {
        run({"simulate", "--pattern", "sin", "--n", "80", "--p", "4", "--seed", "5", "--out",
             p("data" + tag + ".csv")});
        run({"train", "--data", p("data1.csv"), "--loss", "linear", "--margin", "0.25", "--out",
             p("model" + tag + ".json")});
        run({"predict", "--model", p("model" + tag + ".json"), "--data", p("data1.csv"), "--out",
             p("pred" + tag + ".csv")});
        run({"evaluate", "--data", p("data1.csv"), "--seed", "9", "--margins", "0,0.5", "--depths",
             "1,4", "--min-samples-splits", "2", "--inner-folds", "3", "--out",
             p("cv" + tag + ".csv")});
    }
    std::string differing;
    for (const std::string stem : {"data", "model", "pred", "cv"}) {
        const std::string ext = stem == "model" ? ".json" : ".csv";
        const auto a = slurp(dir / (stem + "1" + ext));
        if (a.empty() || a != slurp(dir / (stem + "2" + ext))) differing += " " + stem;
    }
    fs::remove_all(dir);
    if (failures) return {false, std::to_string(failures) + " CLI runs failed"};
    if (!differing.empty()) return {false, "outputs differ:" + differing};
    return {true, "dataset, model, predictions and CV report byte-identical across two runs"};
}

Outcome property_suites() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-12.0, 12.0);
    std::vector<std::string> failed;

    // Convexity of hinge sums at random chords.
    bool convex = true;
    for (int trial = 0; trial < 300 && convex; ++trial) {
        const auto kind = trial % 2 ? LossKind::Linear : LossKind::Squared;
        const auto terms = oracle::random_terms(rng, 40, kind, 0.5, trial % 3 == 0);
        const double a = u(rng), b = u(rng);
        const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double mid = oracle::hinge_sum(terms, lambda * a + (1 - lambda) * b);
        const double chord =
            lambda * oracle::hinge_sum(terms, a) + (1 - lambda) * oracle::hinge_sum(terms, b);
        convex = mid <= chord + 1e-9 * std::max(1.0, chord);
    }
    if (!convex) failed.push_back("convexity");

    // Minimum never decreases under insertion; output is order independent.
    bool monotone = true, permutation = true;
    for (int trial = 0; trial < 300; ++trial) {
        const auto kind = trial % 2 ? LossKind::Linear : LossKind::Squared;
        auto terms = oracle::random_terms(rng, 120, kind, (trial % 3) * 0.5, trial % 2 == 0);
        HingeSolver s(kind, terms.front().margin);
        double previous = 0.0;
        MinResult forward;
        for (const auto& t : terms) {
            forward = s.insert(t);
            monotone = monotone && forward.min_value >= previous - 1e-12 * std::max(1.0, previous);
            previous = forward.min_value;
        }
        std::shuffle(terms.begin(), terms.end(), rng);
        HingeSolver shuffled(kind, terms.front().margin);
        MinResult other;
        for (const auto& t : terms) other = shuffled.insert(t);
        permutation = permutation && oracle::close(forward.min_value, other.min_value) &&
                      oracle::close(forward.predicted_mu, other.predicted_mu);
    }
    if (!monotone) failed.push_back("monotonicity");
    if (!permutation) failed.push_back("permutation invariance");

    // Model JSON and CSV round trips.
    bool model_round_trip = true, csv_round_trip = true;
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = oracle::random_dataset(rng, 10 + trial, 1 + trial % 4);
        TreeParams params;
        params.loss = trial % 2 ? LossKind::Linear : LossKind::Squared;
        params.margin = (trial % 3) * 0.5;
        const auto tree = fit(d, params);
        const auto back = Tree::from_json(tree.to_json());
        for (int k = 0; k < 50; ++k) {
            std::vector<double> x(d.n_features());
            for (auto& v : x) v = u(rng);
            model_round_trip = model_round_trip && back.predict(x) == tree.predict(x);
        }
        std::ostringstream out;
        write_csv(out, d);
        std::istringstream in(out.str());
        const auto again = read_csv(in);
        for (std::size_t i = 0; i < d.size(); ++i) {
            csv_round_trip = csv_round_trip && again[i].features == d[i].features &&
                             again[i].target.lower() == d[i].target.lower() &&
                             again[i].target.upper() == d[i].target.upper();
        }
    }
    if (!model_round_trip) failed.push_back("serialization round trip");
    if (!csv_round_trip) failed.push_back("CSV round trip");

    if (failed.empty()) {
        return {true, "convexity, monotonicity, permutation invariance, model and CSV round trips"};
    }
    std::string detail = "failed:";
    for (const auto& f : failed) detail += " " + f;
    return {false, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    // Criterion 3 reads the move counts gathered by 1, 2 and 5, so it runs last.
    const std::vector<Criterion> criteria{
        {1, "solver matches the brute-force oracle", oracle_equivalence},
        {2, "two-interval linear trace", figure_trace},
        {4, "squared moves do not grow with n", squared_moves},
        {5, "log-linear timing, 1e6 vs 1e5", timing},
        {6, "split search matches exhaustive search", split_equivalence},
        {7, "nonlinear recovery under cross-validation", recovery},
        {8, "interval MSE equals the squared leaf cost", metric_consistency},
        {9, "deterministic CLI outputs", determinism},
        {10, "property suites", property_suites},
        {3, "at most one pointer move per linear insertion", linear_bound},
    };

    std::vector<std::pair<int, std::string>> lines;
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        lines.emplace_back(c.id, std::string(o.pass ? "PASS" : "FAIL") + " criterion " +
                                     std::to_string(c.id) + ": " + c.name + " (" + o.detail +
                                     ", " + fmt(secs) + " s)");
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    return failures == 0 ? 0 : 1;
}
