#include "mmit/eval.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <tuple>

#include "mmit/data_io.hpp"
#include "mmit/solver.hpp"
#include "parallel.hpp"

namespace mmit {

double interval_mse(const std::vector<double>& predictions,
                    const std::vector<IntervalTarget>& targets) {
    if (predictions.size() != targets.size()) {
        throw std::invalid_argument("interval_mse: " + std::to_string(predictions.size()) +
                                    " predictions for " + std::to_string(targets.size()) +
                                    " targets");
    }
    if (targets.empty()) throw std::invalid_argument("interval_mse: no targets");
    double total = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double h = predictions[i];
        double d = 0.0;
        if (h < targets[i].lower()) {
            d = h - targets[i].lower();
        } else if (h > targets[i].upper()) {
            d = h - targets[i].upper();
        }
        total += d * d;
    }
    return total / static_cast<double>(targets.size());
}

ConstantFit constant_baseline(const Dataset& train) {
    if (train.empty()) throw std::invalid_argument("constant baseline needs training data");
    HingeSolver solver(LossKind::Squared, 0.0);
    std::vector<HingeTerm> terms;
    for (const auto& e : train.examples()) {
        terms.clear();
        append_terms(terms, e.target, 0.0, LossKind::Squared);
        for (const auto& t : terms) solver.insert(t);
    }
    const auto r = solver.query_min();
    return {r.predicted_mu, r.min_value / static_cast<double>(train.size())};
}

Tree constant_model(const Dataset& train) {
    const auto c = constant_baseline(train);
    TreeNode leaf;
    leaf.prediction = c.prediction;
    leaf.cost = c.mse * static_cast<double>(train.size());
    leaf.n_examples = train.size();
    return Tree(ModelFamily::Mmit, LossKind::Squared, 0.0, train.n_features(), {leaf});
}

namespace {

struct LabelStats {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double y) {
        sum += y;
        sum_sq += y * y;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double sse() const { return n ? std::max(0.0, sum_sq - sum * sum / static_cast<double>(n)) : 0.0; }
};

LabelStats stats_of(const std::vector<double>& labels, const std::vector<std::size_t>& rows) {
    LabelStats s;
    for (auto i : rows) s.add(labels[i]);
    return s;
}

struct CartSplit {
    std::size_t feature;
    double threshold;
    double sse;
};

std::optional<CartSplit> best_cart_split(const std::vector<std::vector<double>>& x,
                                         const std::vector<double>& y,
                                         const std::vector<std::size_t>& rows,
                                         std::size_t n_features) {
    std::optional<CartSplit> best;
    const auto total = stats_of(y, rows);
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n_features; ++j) {
        order = rows;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return x[a][j] < x[b][j]; });
        LabelStats left;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            left.add(y[order[k]]);
            const double v = x[order[k]][j];
            if (x[order[k + 1]][j] == v) continue;
            LabelStats right{total.sum - left.sum, total.sum_sq - left.sum_sq, total.n - left.n};
            const double sse = left.sse() + right.sse();
            if (!best || sse < best->sse) best = CartSplit{j, v, sse};
        }
    }
    return best;
}

}  // namespace

Tree cart_fit(const std::vector<std::vector<double>>& features, const std::vector<double>& labels,
              std::size_t n_features, const TreeParams& params) {
    params.validate();
    if (labels.empty()) throw std::invalid_argument("cart_fit: no labels");
    if (features.size() != labels.size()) {
        throw std::invalid_argument("cart_fit: features and labels differ in length");
    }

    struct Task {
        std::vector<std::size_t> rows;
        std::size_t depth;
        std::optional<std::size_t> parent;
    };
    std::vector<TreeNode> nodes;
    std::vector<Task> stack;
    {
        std::vector<std::size_t> all(labels.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        stack.push_back({std::move(all), 0, std::nullopt});
    }
    while (!stack.empty()) {
        Task task = std::move(stack.back());
        stack.pop_back();
        const std::size_t index = nodes.size();
        if (task.parent) nodes[*task.parent].right = index;

        const auto s = stats_of(labels, task.rows);
        TreeNode node;
        node.prediction = s.mean();
        node.cost = s.sse();
        node.n_examples = task.rows.size();

        std::optional<CartSplit> split;
        const bool depth_ok = !params.max_depth || task.depth < *params.max_depth;
        if (depth_ok && task.rows.size() >= params.min_samples_split) {
            split = best_cart_split(features, labels, task.rows, n_features);
            if (split && !(split->sse < node.cost && node.cost - split->sse > params.min_cost_decrease)) {
                split.reset();
            }
        }
        if (!split) {
            nodes.push_back(node);
            continue;
        }
        node.leaf = false;
        node.feature = split->feature;
        node.threshold = split->threshold;
        nodes.push_back(node);

        std::vector<std::size_t> left, right;
        for (auto i : task.rows) {
            (features[i][split->feature] <= split->threshold ? left : right).push_back(i);
        }
        stack.push_back({std::move(right), task.depth + 1, index});
        stack.push_back({std::move(left), task.depth + 1, std::nullopt});
    }
    return Tree(ModelFamily::IntervalCart, LossKind::Squared, params.margin, n_features,
                std::move(nodes));
}

Tree interval_cart_fit(const Dataset& train, const TreeParams& params) {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (const auto& e : train.examples()) {
        if (std::isfinite(e.target.lower())) {
            x.push_back(e.features);
            y.push_back(e.target.lower() + params.margin);
        }
        if (std::isfinite(e.target.upper())) {
            x.push_back(e.features);
            y.push_back(e.target.upper() - params.margin);
        }
    }
    if (y.empty()) {
        throw std::invalid_argument("interval-cart needs at least one finite interval limit");
    }
    return cart_fit(x, y, train.n_features(), params);
}

std::string_view to_string(Learner learner) {
    switch (learner) {
        case Learner::MmitLinear: return "mmit-l";
        case Learner::MmitSquared: return "mmit-s";
        case Learner::IntervalCart: return "interval-cart";
        case Learner::Constant: return "constant";
    }
    return "constant";
}

Learner parse_learner(std::string_view name) {
    for (auto l : {Learner::MmitLinear, Learner::MmitSquared, Learner::IntervalCart,
                   Learner::Constant}) {
        const auto want = to_string(l);
        if (std::ranges::equal(name, want, [](char a, char b) {
                return std::tolower(static_cast<unsigned char>(a)) == b;
            })) {
            return l;
        }
    }
    throw std::invalid_argument("unknown model family '" + std::string(name) +
                                "' (expected mmit-l, mmit-s, interval-cart or constant)");
}

Tree fit_learner(Learner learner, const Dataset& train, const TreeParams& params) {
    switch (learner) {
        case Learner::MmitLinear: {
            auto p = params;
            p.loss = LossKind::Linear;
            return fit(train, p);
        }
        case Learner::MmitSquared: {
            auto p = params;
            p.loss = LossKind::Squared;
            return fit(train, p);
        }
        case Learner::IntervalCart: return interval_cart_fit(train, params);
        case Learner::Constant: return constant_model(train);
    }
    throw std::logic_error("unhandled learner");
}

std::vector<TreeParams> default_grid() {
    std::vector<TreeParams> grid;
    for (double margin : {0.0, 0.125, 0.25, 0.5, 1.0, 2.0}) {
        for (std::optional<std::size_t> depth :
             {std::optional<std::size_t>{1}, std::optional<std::size_t>{2},
              std::optional<std::size_t>{4}, std::optional<std::size_t>{8},
              std::optional<std::size_t>{16}, std::optional<std::size_t>{}}) {
            for (std::size_t mss : {2, 8, 32}) {
                TreeParams p;
                p.margin = margin;
                p.max_depth = depth;
                p.min_samples_split = mss;
                grid.push_back(p);
            }
        }
    }
    return grid;
}

void CVPlan::validate() const {
    if (n_folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    if (inner_folds < 2) throw std::invalid_argument("inner cross-validation needs at least 2 folds");
    if (grid.empty()) throw std::invalid_argument("hyperparameter grid is empty");
    for (const auto& p : grid) p.validate();
}

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("fold count must be positive");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> fold(n);
    for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = pos % k;
    return fold;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

void split_by_fold(const std::vector<std::size_t>& fold, std::size_t f,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& test) {
    train.clear();
    test.clear();
    for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? test : train).push_back(i);
}

double score(const Tree& model, const Dataset& data) {
    return interval_mse(model.predict(data), data.targets());
}

// Grid points that differ only in max_depth share one fit, truncated per depth.
std::vector<std::vector<std::size_t>> depth_groups(const std::vector<TreeParams>& grid) {
    std::map<std::tuple<double, std::size_t, double>, std::vector<std::size_t>> groups;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        groups[{grid[g].margin, grid[g].min_samples_split, grid[g].min_cost_decrease}].push_back(g);
    }
    std::vector<std::vector<std::size_t>> out;
    for (auto& [key, members] : groups) out.push_back(std::move(members));
    return out;
}

// One entry per member of `members`, fitted on `train`.
std::vector<Tree> fit_group(Learner learner, const Dataset& train,
                            const std::vector<TreeParams>& grid,
                            const std::vector<std::size_t>& members) {
    auto deepest = grid[members.front()];
    for (auto g : members) {
        if (!grid[g].max_depth) {
            deepest.max_depth.reset();
            break;
        }
        deepest.max_depth = std::max(*deepest.max_depth, *grid[g].max_depth);
    }
    const auto full = fit_learner(learner, train, deepest);
    std::vector<Tree> out;
    out.reserve(members.size());
    for (auto g : members) {
        out.push_back(grid[g].max_depth ? full.truncated(*grid[g].max_depth) : full);
    }
    return out;
}

std::vector<double> grid_scores(Learner learner, const Dataset& train, const CVPlan& plan,
                                std::uint64_t seed) {
    const auto& grid = plan.grid;
    const auto groups = depth_groups(grid);
    std::vector<double> scores(grid.size(), 0.0);

    if (train.size() < plan.inner_folds) {
        detail::parallel_for(groups.size(), plan.threads, [&](std::size_t k) {
            const auto models = fit_group(learner, train, grid, groups[k]);
            for (std::size_t m = 0; m < models.size(); ++m) scores[groups[k][m]] = score(models[m], train);
        });
        return scores;
    }

    const auto fold = fold_assignment(train.size(), plan.inner_folds, seed);
    // per_task[task][member]: inner test MSE of one group on one inner fold
    const std::size_t tasks = groups.size() * plan.inner_folds;
    std::vector<std::vector<double>> per_task(tasks);
    detail::parallel_for(tasks, plan.threads, [&](std::size_t t) {
        const std::size_t k = t / plan.inner_folds;
        const std::size_t f = t % plan.inner_folds;
        std::vector<std::size_t> tr, te;
        split_by_fold(fold, f, tr, te);
        const auto inner_train = train.subset(tr);
        const auto inner_test = train.subset(te);
        const auto models = fit_group(learner, inner_train, grid, groups[k]);
        per_task[t].reserve(models.size());
        for (const auto& m : models) per_task[t].push_back(score(m, inner_test));
    });
    for (std::size_t t = 0; t < tasks; ++t) {
        const auto& members = groups[t / plan.inner_folds];
        for (std::size_t m = 0; m < members.size(); ++m) scores[members[m]] += per_task[t][m];
    }
    for (auto& s : scores) s /= static_cast<double>(plan.inner_folds);
    return scores;
}

}  // namespace

std::vector<FoldResult> run_cv(const Dataset& data, const CVPlan& plan, Learner learner) {
    plan.validate();
    if (data.size() < plan.n_folds) {
        throw std::invalid_argument("dataset has " + std::to_string(data.size()) +
                                    " examples, fewer than the " + std::to_string(plan.n_folds) +
                                    " folds requested");
    }
    const auto fold = fold_assignment(data.size(), plan.n_folds, plan.seed);
    std::vector<FoldResult> results;
    std::vector<std::size_t> tr, te;
    for (std::size_t f = 0; f < plan.n_folds; ++f) {
        split_by_fold(fold, f, tr, te);
        const auto train = data.subset(tr);
        const auto test = data.subset(te);

        TreeParams selected;
        if (learner != Learner::Constant) {
            const auto scores = grid_scores(learner, train, plan, mix_seed(plan.seed, f + 1));
            const auto best = std::min_element(scores.begin(), scores.end()) - scores.begin();
            selected = plan.grid[static_cast<std::size_t>(best)];
        }
        const auto model = fit_learner(learner, train, selected);
        if (learner == Learner::MmitLinear) selected.loss = LossKind::Linear;
        if (learner == Learner::MmitSquared) selected.loss = LossKind::Squared;
        results.push_back({f, learner, selected, score(model, train), score(model, test)});
    }
    return results;
}

double mean_test_mse(const std::vector<FoldResult>& results) {
    if (results.empty()) return 0.0;
    double total = 0.0;
    for (const auto& r : results) total += r.test_mse;
    return total / static_cast<double>(results.size());
}

void write_cv_report(std::ostream& out, const std::vector<FoldResult>& results) {
    out << "fold,model,params,train_mse,test_mse\n";
    for (const auto& r : results) {
        out << r.fold << ',' << to_string(r.learner) << ','
            << (r.learner == Learner::Constant ? std::string("-") : r.selected.describe()) << ','
            << format_double(r.train_mse) << ',' << format_double(r.test_mse) << '\n';
    }
}

}  // namespace mmit
