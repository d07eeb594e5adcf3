#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmit/interval.hpp"

namespace mmit {

struct TreeParams {
    LossKind loss = LossKind::Squared;
    double margin = 0.0;
    std::optional<std::size_t> max_depth;  // nullopt: unlimited
    std::size_t min_samples_split = 2;
    double min_cost_decrease = 0.0;

    void validate() const;
    /// "margin=0.5;max_depth=4;min_samples_split=2;min_cost_decrease=0"
    std::string describe() const;
};

/// Which learner produced a tree. Both share the node format.
enum class ModelFamily { Mmit, IntervalCart };

/// Node of a tree stored in preorder. An internal node's left child sits at
/// the next index; `right` holds the index of its right child.
struct TreeNode {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    double prediction = 0.0;
    double cost = 0.0;
    std::size_t n_examples = 0;
    std::size_t depth = 0;
    std::size_t right = 0;

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class Tree {
public:
    Tree(ModelFamily family, LossKind loss, double margin, std::size_t n_features,
         std::vector<TreeNode> nodes);

    ModelFamily family() const { return family_; }
    LossKind loss() const { return loss_; }
    double margin() const { return margin_; }
    std::size_t n_features() const { return n_features_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    /// Routes x (x[feature] <= threshold goes left) to a leaf prediction.
    /// Throws std::invalid_argument on a dimension mismatch.
    double predict(std::span<const double> features) const;
    std::vector<double> predict(const Dataset& data) const;

    /// Index of the leaf reached by x.
    std::size_t leaf_index(std::span<const double> features) const;

    /// The same tree with every node at `max_depth` turned into a leaf. Nodes
    /// keep the prediction and cost they would have as leaves, so this equals
    /// growing with the tighter depth limit.
    Tree truncated(std::size_t max_depth) const;

    std::size_t depth() const;
    std::size_t n_leaves() const;
    double leaf_cost_sum() const;

    std::string to_json() const;
    static Tree from_json(const std::string& text);

    void save(const std::string& path) const;
    static Tree load(const std::string& path);

private:
    ModelFamily family_;
    LossKind loss_;
    double margin_;
    std::size_t n_features_;
    std::vector<TreeNode> nodes_;
};

/// Grows a maximum margin interval tree by greedy recursive partitioning.
Tree fit(const Dataset& data, const TreeParams& params);

/// Total hinge loss of the tree's predictions under params.loss / params.margin.
double total_cost(const Tree& tree, const Dataset& data, const TreeParams& params);

}  // namespace mmit
