#include "mmit/solver.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>

namespace mmit {

PieceCoefficients active_polynomial(const HingeTerm& term) {
    // loss(sign * (mu - breakpoint)), expanded around the breakpoint
    const double s = term.sign;
    const double bp = term.breakpoint();
    if (term.kind == LossKind::Linear) return {0.0, s, -s * bp};
    return {1.0, -2.0 * bp, bp * bp};
}

PieceCoefficients difference_polynomial(const HingeTerm& term) {
    const double s = term.sign;
    const auto p = active_polynomial(term);
    return {s * p.a, s * p.b, s * p.c};
}

HingeSolver::HingeSolver(LossKind kind, double margin)
    : kind_{kind}, margin_{margin} {
    if (!(margin >= 0.0) || !std::isfinite(margin)) {
        throw std::invalid_argument("margin must be finite and nonnegative, got " +
                                    std::to_string(margin));
    }
}

// Terms sharing a breakpoint differ only in sign: every linear difference is
// (0, 1, -bp) and every squared one is s * (1, -2 bp, bp^2).
PieceCoefficients HingeSolver::diff_at(BreakpointTree::Cursor c) const {
    const double bp = breakpoints_.key(c);
    const auto& e = breakpoints_.entry(c);
    if (kind_ == LossKind::Linear) {
        const double m = static_cast<double>(e.multiplicity);
        return {0.0, m, -m * bp};
    }
    const double s = static_cast<double>(e.sign_sum);
    return {s, -2.0 * s * bp, s * bp * bp};
}

double HingeSolver::left_bound() const {
    if (breakpoints_.is_begin(right_)) return -kInf;
    return breakpoints_.key(breakpoints_.prev(right_));
}

double HingeSolver::right_bound() const {
    if (right_ == BreakpointTree::end()) return kInf;
    return breakpoints_.key(right_);
}

// Some minimizer lies strictly right of the pointer piece's left end.
bool HingeSolver::minimum_right_of_left_bound() const {
    if (breakpoints_.is_begin(right_)) return true;
    const double left = breakpoints_.key(breakpoints_.prev(right_));
    return piece_.is_constant() || piece_.slope(left) < 0.0;
}

// Some minimizer lies strictly right of the pointer piece's right end.
bool HingeSolver::minimum_right_of_right_bound() const {
    if (right_ == BreakpointTree::end()) return false;
    const auto next = piece_ + diff_at(right_);
    return next.is_constant() || next.slope(breakpoints_.key(right_)) < 0.0;
}

MinResult HingeSolver::insert(const HingeTerm& term) {
    if (term.kind != kind_) {
        throw std::invalid_argument("hinge term loss kind does not match the solver");
    }
    if (term.margin != margin_) {
        throw std::invalid_argument("hinge term margin does not match the solver");
    }
    if (term.sign != 1 && term.sign != -1) {
        throw std::invalid_argument("hinge term sign must be -1 or +1");
    }
    const double position = term.breakpoint();
    if (!std::isfinite(position)) {
        throw std::invalid_argument("hinge term breakpoint must be finite");
    }

    // Coincident breakpoints share one entry; their differences add up.
    auto& entry = breakpoints_.entry(breakpoints_.insert(position, right_));
    ++entry.multiplicity;
    entry.sign_sum += term.sign;
    ++count_;

    // right_ still names the same position, so a breakpoint landing left of it
    // shifts the pointer index by one while the cursor follows its entry.
    const double right = right_bound();
    const bool active = term.sign > 0 ? position < right : position >= right;
    if (active) piece_ += active_polynomial(term);

    std::size_t moves = 0;
    while (!minimum_right_of_left_bound()) {
        right_ = breakpoints_.prev(right_);
        piece_ -= diff_at(right_);
        ++moves;
    }
    if (moves == 0) {
        while (minimum_right_of_right_bound()) {
            piece_ += diff_at(right_);
            right_ = breakpoints_.next(right_);
            ++moves;
        }
    }
    last_moves_ = moves;
    move_count_ += moves;
    return query_min();
}

MinResult HingeSolver::query_min() const {
    const double left = left_bound();
    const double right = right_bound();
    MinResult r;

    if (piece_.a > 0.0) {
        const double vertex = std::clamp(-piece_.b / (2.0 * piece_.a), left, right);
        r.min_value = piece_(vertex);
        r.argmin_lo = r.argmin_hi = r.predicted_mu = vertex;
        return r;
    }

    if (piece_.is_constant()) {
        r.min_value = piece_.c;
        // Neighbouring pieces differ by a nonconstant difference, so the flat
        // region is exactly this piece.
        r.argmin_lo = left;
        r.argmin_hi = right;
        const bool lo_finite = std::isfinite(r.argmin_lo);
        const bool hi_finite = std::isfinite(r.argmin_hi);
        if (lo_finite && hi_finite) {
            r.predicted_mu = r.argmin_lo + (r.argmin_hi - r.argmin_lo) / 2.0;
        } else if (lo_finite) {
            r.predicted_mu = r.argmin_lo;
        } else if (hi_finite) {
            r.predicted_mu = r.argmin_hi;
        } else {
            r.predicted_mu = 0.0;
        }
        return r;
    }

    // Linear piece: the minimum sits at an end.
    const double at = piece_.b < 0.0 ? right : left;
    r.min_value = piece_(at);
    r.argmin_lo = r.argmin_hi = r.predicted_mu = at;
    return r;
}

std::size_t HingeSolver::pointer_index() const { return breakpoints_.rank(right_) + 1; }

std::vector<BreakpointEntry> HingeSolver::breakpoints() const {
    std::vector<BreakpointEntry> out;
    out.reserve(breakpoints_.size());
    for (auto c = breakpoints_.begin(); c != BreakpointTree::end(); c = breakpoints_.next(c)) {
        const auto& e = breakpoints_.entry(c);
        out.push_back({breakpoints_.key(c), diff_at(c), e.multiplicity});
    }
    return out;
}

std::vector<PieceCoefficients> HingeSolver::reconstruct_pieces() const {
    const auto entries = breakpoints();
    std::vector<PieceCoefficients> pieces(entries.size() + 1);
    const std::size_t k = pointer_index() - 1;
    pieces[k] = piece_;
    for (std::size_t i = k; i > 0; --i) pieces[i - 1] = pieces[i] - entries[i - 1].diff;
    for (std::size_t i = k; i < entries.size(); ++i) pieces[i + 1] = pieces[i] + entries[i].diff;
    return pieces;
}

}  // namespace mmit
