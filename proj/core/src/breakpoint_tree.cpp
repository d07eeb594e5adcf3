#include "mmit/breakpoint_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace mmit {

namespace {

constexpr std::size_t kMaxHeight = 40;

// Branch-free counts over a short sorted array; these vectorize and stream
// through the node in order, which beats binary search on cold nodes.
std::uint32_t count_below(const double* keys, std::uint32_t n, double key) {
    std::uint32_t k = 0;
    for (std::uint32_t i = 0; i < n; ++i) k += keys[i] < key;
    return k;
}

std::uint32_t count_not_above(const double* keys, std::uint32_t n, double key) {
    std::uint32_t k = 0;
    for (std::uint32_t i = 0; i < n; ++i) k += keys[i] <= key;
    return k;
}

}  // namespace

BreakpointTree::Cursor BreakpointTree::insert(double key, Cursor& tracked) {
    if (root_ < 0) {
        leaves_.emplace_back();
        root_ = head_ = tail_ = 0;
        height_ = 0;
    }

    std::array<std::int32_t, kMaxHeight> path_nodes{};
    std::array<std::uint32_t, kMaxHeight> path_slots{};
    std::int32_t node = root_;
    for (std::size_t level = 0; level < height_; ++level) {
        const Inner& in = inners_[static_cast<std::size_t>(node)];
        const std::uint32_t slot = count_not_above(in.keys.data(), in.count - 1, key);
        path_nodes[level] = node;
        path_slots[level] = slot;
        node = in.child[slot];
    }

    const std::int32_t leaf_id = node;
    {
        Leaf& leaf = leaves_[static_cast<std::size_t>(leaf_id)];
        const std::uint32_t pos = count_below(leaf.keys.data(), leaf.count, key);
        if (pos < leaf.count && leaf.keys[pos] == key) return {leaf_id, pos};

        std::copy_backward(leaf.keys.begin() + pos, leaf.keys.begin() + leaf.count,
                           leaf.keys.begin() + leaf.count + 1);
        std::copy_backward(leaf.vals.begin() + pos, leaf.vals.begin() + leaf.count,
                           leaf.vals.begin() + leaf.count + 1);
        leaf.keys[pos] = key;
        leaf.vals[pos] = Entry{};
        ++leaf.count;
        ++size_;
        if (tracked.leaf == leaf_id && tracked.slot >= pos) ++tracked.slot;

        Cursor inserted{leaf_id, pos};
        if (leaf.count <= kLeafCapacity) return inserted;

        // Split: the upper half moves to a new leaf linked after this one.
        const std::uint32_t half = leaf.count / 2;
        const auto right_id = static_cast<std::int32_t>(leaves_.size());
        leaves_.emplace_back();
        Leaf& left = leaves_[static_cast<std::size_t>(leaf_id)];
        Leaf& right = leaves_.back();
        right.count = left.count - half;
        std::copy(left.keys.begin() + half, left.keys.begin() + left.count, right.keys.begin());
        std::copy(left.vals.begin() + half, left.vals.begin() + left.count, right.vals.begin());
        left.count = half;
        right.prev = leaf_id;
        right.next = left.next;
        if (left.next >= 0) {
            leaves_[static_cast<std::size_t>(left.next)].prev = right_id;
        } else {
            tail_ = right_id;
        }
        left.next = right_id;

        for (Cursor* c : {&tracked, &inserted}) {
            if (c->leaf == leaf_id && c->slot >= half) *c = {right_id, c->slot - half};
        }
        insert_separator(path_nodes.data(), path_slots.data(), height_, right.keys[0], right_id);
        return inserted;
    }
}

void BreakpointTree::insert_separator(const std::int32_t* path_nodes,
                                      const std::uint32_t* path_slots, std::size_t depth,
                                      double separator, std::int32_t right) {
    while (true) {
        if (depth == 0) {
            // The split node was the root.
            Inner root;
            root.count = 2;
            root.child[0] = root_;
            root.child[1] = right;
            root.keys[0] = separator;
            inners_.push_back(root);
            root_ = static_cast<std::int32_t>(inners_.size() - 1);
            if (++height_ >= kMaxHeight) throw std::length_error("breakpoint tree too deep");
            return;
        }
        --depth;
        const std::int32_t id = path_nodes[depth];
        const std::uint32_t slot = path_slots[depth];
        {
            Inner& in = inners_[static_cast<std::size_t>(id)];
            std::copy_backward(in.keys.begin() + slot, in.keys.begin() + (in.count - 1),
                               in.keys.begin() + in.count);
            std::copy_backward(in.child.begin() + slot + 1, in.child.begin() + in.count,
                               in.child.begin() + in.count + 1);
            in.keys[slot] = separator;
            in.child[slot + 1] = right;
            ++in.count;
            if (in.count <= kInnerCapacity) return;
        }

        // Split: the left node keeps `half` children; the key between the
        // halves moves up.
        inners_.emplace_back();
        Inner& in = inners_[static_cast<std::size_t>(id)];
        Inner& sibling = inners_.back();
        const std::uint32_t half = in.count / 2;
        sibling.count = in.count - half;
        std::copy(in.child.begin() + half, in.child.begin() + in.count, sibling.child.begin());
        std::copy(in.keys.begin() + half, in.keys.begin() + (in.count - 1), sibling.keys.begin());
        separator = in.keys[half - 1];
        in.count = half;
        right = static_cast<std::int32_t>(inners_.size() - 1);
    }
}

std::size_t BreakpointTree::rank(Cursor c) const {
    if (c.leaf < 0) return size_;
    std::size_t before = c.slot;
    for (std::int32_t l = leaves_[static_cast<std::size_t>(c.leaf)].prev; l >= 0;
         l = leaves_[static_cast<std::size_t>(l)].prev) {
        before += leaves_[static_cast<std::size_t>(l)].count;
    }
    return before;
}

}  // namespace mmit
