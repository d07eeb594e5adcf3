#include "mmit/split.hpp"

#include <algorithm>
#include <numeric>

#include "mmit/solver.hpp"

namespace mmit {

std::vector<ThresholdGroup> group_by_feature(const Dataset& data,
                                             const std::vector<std::size_t>& rows,
                                             std::size_t feature, double margin, LossKind kind) {
    std::vector<std::size_t> order(rows);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data[a].features[feature] < data[b].features[feature];
    });

    std::vector<ThresholdGroup> groups;
    for (auto i : order) {
        const double v = data[i].features[feature];
        if (groups.empty() || groups.back().value != v) groups.push_back({v, {}});
        append_terms(groups.back().terms, data[i].target, margin, kind);
    }
    return groups;
}

std::vector<SplitCandidate> feature_sweep(const std::vector<ThresholdGroup>& groups,
                                          LossKind kind, double margin) {
    const std::size_t k = groups.size();
    if (k < 2) return {};

    std::vector<MinResult> forward(k);
    {
        HingeSolver solver(kind, margin);
        for (std::size_t g = 0; g < k; ++g) {
            for (const auto& t : groups[g].terms) solver.insert(t);
            forward[g] = solver.query_min();
        }
    }
    std::vector<MinResult> backward(k);
    {
        HingeSolver solver(kind, margin);
        for (std::size_t g = k; g-- > 0;) {
            for (const auto& t : groups[g].terms) solver.insert(t);
            backward[g] = solver.query_min();
        }
    }

    std::vector<SplitCandidate> out;
    out.reserve(k - 1);
    for (std::size_t g = 0; g + 1 < k; ++g) {
        out.push_back({groups[g].value, forward[g].min_value, forward[g].predicted_mu,
                       backward[g + 1].min_value, backward[g + 1].predicted_mu});
    }
    return out;
}

LeafFit fit_leaf(const Dataset& data, const std::vector<std::size_t>& rows, LossKind kind,
                 double margin) {
    HingeSolver solver(kind, margin);
    std::vector<HingeTerm> terms;
    for (auto i : rows) {
        terms.clear();
        append_terms(terms, data[i].target, margin, kind);
        for (const auto& t : terms) solver.insert(t);
    }
    const auto r = solver.query_min();
    return {r.min_value, r.predicted_mu};
}

std::optional<SplitResult> best_split(const Dataset& data, const std::vector<std::size_t>& rows,
                                      LossKind kind, double margin) {
    if (rows.empty()) return std::nullopt;
    return best_split(data, rows, kind, margin, fit_leaf(data, rows, kind, margin).cost);
}

std::optional<SplitResult> best_split(const Dataset& data, const std::vector<std::size_t>& rows,
                                      LossKind kind, double margin, double leaf_cost) {
    std::optional<SplitResult> best;
    for (std::size_t j = 0; j < data.n_features(); ++j) {
        const auto candidates = feature_sweep(group_by_feature(data, rows, j, margin, kind), kind,
                                              margin);
        // Candidates come in increasing threshold order, and features are
        // scanned in increasing index, so strict < keeps the first of a tie.
        for (const auto& c : candidates) {
            const double total = c.total_cost();
            if (!best || total < best->total_cost) {
                best = SplitResult{j,           c.threshold, c.left_prediction, c.right_prediction,
                                   c.left_cost, c.right_cost, total};
            }
        }
    }
    if (best && !(best->total_cost < leaf_cost)) return std::nullopt;
    return best;
}

std::optional<SplitResult> best_split(const Dataset& data, LossKind kind, double margin) {
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return best_split(data, rows, kind, margin);
}

}  // namespace mmit
