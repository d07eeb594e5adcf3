#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mmit/interval.hpp"

namespace mmit {

/// Hinge terms of every example whose feature equals `value`.
struct ThresholdGroup {
    double value;
    std::vector<HingeTerm> terms;
};

/// Cost of splitting at `threshold` (rule: x <= threshold goes left).
struct SplitCandidate {
    double threshold;
    double left_cost;
    double left_prediction;
    double right_cost;
    double right_prediction;

    double total_cost() const { return left_cost + right_cost; }
};

struct SplitResult {
    std::size_t feature;
    double threshold;
    double left_prediction;
    double right_prediction;
    double left_cost;
    double right_cost;
    double total_cost;
};

/// Groups the terms of the given examples by their value of `feature`,
/// in increasing order of value.
std::vector<ThresholdGroup> group_by_feature(const Dataset& data,
                                             const std::vector<std::size_t>& rows,
                                             std::size_t feature, double margin, LossKind kind);

/// One candidate per threshold except the largest: a forward solver sweep
/// gives the left costs, a backward sweep the right costs. Fewer than two
/// groups yields no candidates.
std::vector<SplitCandidate> feature_sweep(const std::vector<ThresholdGroup>& groups,
                                          LossKind kind, double margin);

/// Minimum-cost split of the examples at `rows`. Empty when no feature has two
/// distinct values or when no split costs strictly less than the unsplit leaf.
/// Ties go to the lowest feature index, then the lowest threshold.
std::optional<SplitResult> best_split(const Dataset& data, const std::vector<std::size_t>& rows,
                                      LossKind kind, double margin);

/// Same, with the unsplit leaf cost already known.
std::optional<SplitResult> best_split(const Dataset& data, const std::vector<std::size_t>& rows,
                                      LossKind kind, double margin, double unsplit_cost);

/// Convenience overload over all examples.
std::optional<SplitResult> best_split(const Dataset& data, LossKind kind, double margin);

/// Minimum of the summed hinge losses of the given examples, solved by the
/// incremental solver.
struct LeafFit {
    double cost;
    double prediction;
};
LeafFit fit_leaf(const Dataset& data, const std::vector<std::size_t>& rows, LossKind kind,
                 double margin);

}  // namespace mmit
