#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mmit {

/// Ordered map from breakpoint position to the counts of hinge terms sharing
/// it, stored as a B+ tree whose leaves are sorted arrays linked in
/// key order. Nodes live in vectors and refer to each other by index, so the
/// structure copies by value and cursors stay meaningful across copies.
///
/// A Cursor names one entry, or the past-the-end position. Insertion keeps a
/// caller-supplied cursor on the entry it named.
class BreakpointTree {
public:
    struct Entry {
        std::uint32_t multiplicity = 0;  // terms at this position
        std::int32_t sign_sum = 0;       // sum of their signs
    };

    struct Cursor {
        std::int32_t leaf = -1;  // -1: past the end
        std::uint32_t slot = 0;
        friend bool operator==(const Cursor&, const Cursor&) = default;
    };

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    Cursor begin() const { return size_ == 0 ? end() : Cursor{head_, 0}; }
    static constexpr Cursor end() { return Cursor{}; }
    bool is_begin(Cursor c) const { return c == begin(); }

    Cursor next(Cursor c) const {
        const Leaf& l = leaves_[static_cast<std::size_t>(c.leaf)];
        if (c.slot + 1 < l.count) return {c.leaf, c.slot + 1};
        return l.next < 0 ? end() : Cursor{l.next, 0};
    }
    Cursor prev(Cursor c) const {
        if (c.leaf < 0) return last();
        if (c.slot > 0) return {c.leaf, c.slot - 1};
        const Leaf& p = leaves_[static_cast<std::size_t>(leaves_[static_cast<std::size_t>(c.leaf)].prev)];
        return {leaves_[static_cast<std::size_t>(c.leaf)].prev, p.count - 1};
    }

    double key(Cursor c) const { return leaves_[static_cast<std::size_t>(c.leaf)].keys[c.slot]; }
    const Entry& entry(Cursor c) const { return leaves_[static_cast<std::size_t>(c.leaf)].vals[c.slot]; }
    Entry& entry(Cursor c) { return leaves_[static_cast<std::size_t>(c.leaf)].vals[c.slot]; }

    /// Finds or creates the entry for `key`. `tracked` keeps naming the same
    /// entry (or the end) afterwards. Returns the entry's cursor.
    Cursor insert(double key, Cursor& tracked);

    /// Number of entries before `c`. Linear time.
    std::size_t rank(Cursor c) const;

private:
    static constexpr std::uint32_t kLeafCapacity = 64;
    static constexpr std::uint32_t kInnerCapacity = 48;  // children

    // One spare slot lets a node overflow by one before it is split.
    struct Leaf {
        std::array<double, kLeafCapacity + 1> keys;
        std::array<Entry, kLeafCapacity + 1> vals;
        std::uint32_t count = 0;
        std::int32_t prev = -1;
        std::int32_t next = -1;
    };
    struct Inner {
        std::array<double, kInnerCapacity> keys;  // keys[i] = smallest key under child[i + 1]
        std::array<std::int32_t, kInnerCapacity + 1> child;
        std::uint32_t count = 0;  // number of children
    };

    Cursor last() const {
        const Leaf& t = leaves_[static_cast<std::size_t>(tail_)];
        return {tail_, t.count - 1};
    }
    void insert_separator(const std::int32_t* path_nodes, const std::uint32_t* path_slots,
                          std::size_t depth, double separator, std::int32_t right);

    std::vector<Leaf> leaves_;
    std::vector<Inner> inners_;
    std::int32_t root_ = -1;
    std::size_t height_ = 0;  // inner levels above the leaves
    std::int32_t head_ = -1;
    std::int32_t tail_ = -1;
    std::size_t size_ = 0;
};

}  // namespace mmit
