#pragma once

#include <cstddef>
#include <vector>

#include "mmit/breakpoint_tree.hpp"
#include "mmit/interval.hpp"
#include "mmit/piece.hpp"

namespace mmit {

/// Polynomial form of loss(sign*(mu - limit) + margin), valid where the term is active.
PieceCoefficients active_polynomial(const HingeTerm& term);

/// sign * active_polynomial(term): what crossing the term's breakpoint adds to the running sum.
PieceCoefficients difference_polynomial(const HingeTerm& term);

struct BreakpointEntry {
    double position;
    PieceCoefficients diff;
    std::size_t multiplicity;
};

/// Minimum of the running sum. [argmin_lo, argmin_hi] is the closure of the
/// minimizer set; either end may be infinite.
struct MinResult {
    double min_value = 0.0;
    double argmin_lo = -kInf;
    double argmin_hi = kInf;
    double predicted_mu = 0.0;
};

/// Incremental minimizer of a sum of hinge losses.
///
/// Keeps the sorted breakpoints with the difference function at each, a
/// pointer to the rightmost piece of the sum that holds a global minimum, and
/// the coefficients of that piece. Pieces are half-open (left, right]. Each
/// insertion costs O(log n) plus one O(1) step per pointer move; with the
/// linear loss the pointer moves at most once per insertion.
class HingeSolver {
public:
    HingeSolver(LossKind kind, double margin);

    MinResult insert(const HingeTerm& term);
    MinResult query_min() const;

    LossKind kind() const { return kind_; }
    double margin() const { return margin_; }
    std::size_t size() const { return count_; }
    std::size_t n_breakpoints() const { return breakpoints_.size(); }

    std::size_t pointer_moves() const { return move_count_; }
    std::size_t last_insert_moves() const { return last_moves_; }

    const PieceCoefficients& current_piece() const { return piece_; }

    /// 1-based index of the pointer piece among the n_breakpoints() + 1 pieces.
    /// Linear time; meant for inspection.
    std::size_t pointer_index() const;

    std::vector<BreakpointEntry> breakpoints() const;

    /// Every piece of the running sum, recovered from the pointer piece and the
    /// stored differences. Linear time; meant for inspection.
    std::vector<PieceCoefficients> reconstruct_pieces() const;

private:
    PieceCoefficients diff_at(BreakpointTree::Cursor c) const;
    double left_bound() const;
    double right_bound() const;
    bool minimum_right_of_left_bound() const;
    bool minimum_right_of_right_bound() const;

    LossKind kind_;
    double margin_;
    BreakpointTree breakpoints_;
    // Right end of the pointer piece; end() stands for +inf.
    BreakpointTree::Cursor right_ = BreakpointTree::end();
    PieceCoefficients piece_;
    std::size_t count_ = 0;
    std::size_t move_count_ = 0;
    std::size_t last_moves_ = 0;
};

}  // namespace mmit
