#include "mmit/tree.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mmit/split.hpp"

namespace mmit {

using json = nlohmann::json;

void TreeParams::validate() const {
    if (!(margin >= 0.0) || !std::isfinite(margin)) {
        throw std::invalid_argument("margin must be finite and nonnegative");
    }
    if (min_samples_split < 2) throw std::invalid_argument("min_samples_split must be at least 2");
    if (!(min_cost_decrease >= 0.0)) {
        throw std::invalid_argument("min_cost_decrease must be nonnegative");
    }
}

std::string TreeParams::describe() const {
    std::ostringstream s;
    s << "margin=" << margin << ";max_depth="
      << (max_depth ? std::to_string(*max_depth) : std::string("unlimited"))
      << ";min_samples_split=" << min_samples_split << ";min_cost_decrease=" << min_cost_decrease;
    return s.str();
}

namespace {

// Recomputes `right` and `depth` from the preorder layout; throws when the
// sequence is not a complete binary tree.
void link_preorder(std::vector<TreeNode>& nodes) {
    if (nodes.empty()) throw std::invalid_argument("tree has no nodes");
    std::vector<std::size_t> open;  // internal nodes still missing a right child
    nodes[0].depth = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0) {
            if (!nodes[i - 1].leaf) {
                nodes[i].depth = nodes[i - 1].depth + 1;
            } else {
                if (open.empty()) throw std::invalid_argument("tree has trailing nodes");
                const auto parent = open.back();
                open.pop_back();
                nodes[parent].right = i;
                nodes[i].depth = nodes[parent].depth + 1;
            }
        }
        if (nodes[i].leaf) {
            nodes[i].right = 0;
        } else {
            open.push_back(i);
        }
    }
    if (!open.empty() || !nodes.back().leaf) {
        throw std::invalid_argument("tree is truncated: internal node without children");
    }
}

}  // namespace

Tree::Tree(ModelFamily family, LossKind loss, double margin, std::size_t n_features,
           std::vector<TreeNode> nodes)
    : family_{family}, loss_{loss}, margin_{margin}, n_features_{n_features}, nodes_{std::move(nodes)} {
    link_preorder(nodes_);
    for (const auto& n : nodes_) {
        if (!n.leaf && n.feature >= n_features_) {
            throw std::invalid_argument("tree node splits on feature " + std::to_string(n.feature) +
                                        " but the model has " + std::to_string(n_features_));
        }
    }
}

std::size_t Tree::leaf_index(std::span<const double> features) const {
    if (features.size() != n_features_) {
        throw std::invalid_argument("feature dimension mismatch: expected " +
                                    std::to_string(n_features_) + ", got " +
                                    std::to_string(features.size()));
    }
    std::size_t i = 0;
    while (!nodes_[i].leaf) {
        const auto& n = nodes_[i];
        i = features[n.feature] <= n.threshold ? i + 1 : n.right;
    }
    return i;
}

double Tree::predict(std::span<const double> features) const {
    return nodes_[leaf_index(features)].prediction;
}

std::vector<double> Tree::predict(const Dataset& data) const {
    std::vector<double> out;
    out.reserve(data.size());
    for (const auto& e : data.examples()) out.push_back(predict(e.features));
    return out;
}

Tree Tree::truncated(std::size_t max_depth) const {
    std::vector<TreeNode> kept;
    kept.reserve(nodes_.size());
    std::size_t i = 0;
    while (i < nodes_.size()) {
        TreeNode n = nodes_[i];
        if (!n.leaf && n.depth >= max_depth) {
            n.leaf = true;
            n.feature = 0;
            n.threshold = 0.0;
            n.right = 0;
            kept.push_back(n);
            // Skip the whole subtree: it ends where the next node at depth <= n.depth starts.
            ++i;
            while (i < nodes_.size() && nodes_[i].depth > n.depth) ++i;
            continue;
        }
        kept.push_back(n);
        ++i;
    }
    return Tree(family_, loss_, margin_, n_features_, std::move(kept));
}

std::size_t Tree::depth() const {
    std::size_t d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
}

std::size_t Tree::n_leaves() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.leaf; }));
}

double Tree::leaf_cost_sum() const {
    double total = 0.0;
    for (const auto& n : nodes_) {
        if (n.leaf) total += n.cost;
    }
    return total;
}

std::string Tree::to_json() const {
    json nodes = json::array();
    for (const auto& n : nodes_) {
        json j;
        j["type"] = n.leaf ? "leaf" : "internal";
        j["feature"] = n.leaf ? json(nullptr) : json(n.feature);
        j["threshold"] = n.leaf ? json(nullptr) : json(n.threshold);
        j["prediction"] = n.prediction;
        j["cost"] = n.cost;
        j["n"] = n.n_examples;
        nodes.push_back(std::move(j));
    }
    json doc;
    doc["format"] = "mmit-tree";
    doc["version"] = 1;
    doc["model"] = family_ == ModelFamily::Mmit ? "mmit" : "interval-cart";
    doc["loss"] = std::string(to_string(loss_));
    doc["margin"] = margin_;
    doc["n_features"] = n_features_;
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
}

Tree Tree::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("model JSON parse error: ") + e.what());
    }
    try {
        if (doc.value("format", std::string()) != "mmit-tree") {
            throw std::runtime_error("not an mmit-tree model document");
        }
        const auto model = doc.at("model").get<std::string>();
        ModelFamily family;
        if (model == "mmit") {
            family = ModelFamily::Mmit;
        } else if (model == "interval-cart") {
            family = ModelFamily::IntervalCart;
        } else {
            throw std::runtime_error("unknown model family '" + model + "'");
        }
        const auto loss = parse_loss_kind(doc.at("loss").get<std::string>());
        const double margin = doc.at("margin").get<double>();
        const auto p = doc.at("n_features").get<std::size_t>();

        std::vector<TreeNode> nodes;
        for (const auto& j : doc.at("nodes")) {
            TreeNode n;
            const auto type = j.at("type").get<std::string>();
            if (type != "leaf" && type != "internal") {
                throw std::runtime_error("unknown node type '" + type + "'");
            }
            n.leaf = type == "leaf";
            if (!n.leaf) {
                n.feature = j.at("feature").get<std::size_t>();
                n.threshold = j.at("threshold").get<double>();
            }
            n.prediction = j.at("prediction").get<double>();
            n.cost = j.at("cost").get<double>();
            n.n_examples = j.at("n").get<std::size_t>();
            nodes.push_back(n);
        }
        return Tree(family, loss, margin, p, std::move(nodes));
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed model JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("malformed model JSON: ") + e.what());
    }
}

void Tree::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_json();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Tree Tree::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

Tree fit(const Dataset& data, const TreeParams& params) {
    params.validate();
    if (data.empty()) throw std::invalid_argument("cannot fit a tree on an empty dataset");

    struct Task {
        std::vector<std::size_t> rows;
        std::size_t depth;
        std::optional<std::size_t> parent;  // set for right children
    };
    std::vector<TreeNode> nodes;
    std::vector<Task> stack;
    {
        std::vector<std::size_t> all(data.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        stack.push_back({std::move(all), 0, std::nullopt});
    }

    while (!stack.empty()) {
        Task task = std::move(stack.back());
        stack.pop_back();
        const std::size_t index = nodes.size();
        if (task.parent) nodes[*task.parent].right = index;

        const auto leaf = fit_leaf(data, task.rows, params.loss, params.margin);
        TreeNode node;
        node.prediction = leaf.prediction;
        node.cost = leaf.cost;
        node.n_examples = task.rows.size();
        node.depth = task.depth;

        std::optional<SplitResult> split;
        const bool depth_ok = !params.max_depth || task.depth < *params.max_depth;
        if (depth_ok && task.rows.size() >= params.min_samples_split) {
            split = best_split(data, task.rows, params.loss, params.margin, leaf.cost);
            if (split && !(leaf.cost - split->total_cost > params.min_cost_decrease)) split.reset();
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
            (data[i].features[split->feature] <= split->threshold ? left : right).push_back(i);
        }
        // Right pushed first so the left subtree is emitted next (preorder).
        stack.push_back({std::move(right), task.depth + 1, index});
        stack.push_back({std::move(left), task.depth + 1, std::nullopt});
    }
    return Tree(ModelFamily::Mmit, params.loss, params.margin, data.n_features(), std::move(nodes));
}

double total_cost(const Tree& tree, const Dataset& data, const TreeParams& params) {
    double total = 0.0;
    std::vector<HingeTerm> terms;
    for (const auto& e : data.examples()) {
        const double mu = tree.predict(e.features);
        terms.clear();
        append_terms(terms, e.target, params.margin, params.loss);
        for (const auto& t : terms) total += hinge_value(t, mu);
    }
    return total;
}

}  // namespace mmit
