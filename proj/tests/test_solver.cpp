#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "mmit/solver.hpp"
#include "support/oracle.hpp"

using namespace mmit;

namespace {

MinResult insert_all(HingeSolver& s, const std::vector<HingeTerm>& terms) {
    MinResult r = s.query_min();
    for (const auto& t : terms) r = s.insert(t);
    return r;
}

std::vector<HingeTerm> interval_terms(const std::vector<std::pair<double, double>>& intervals,
                                      double margin, LossKind kind) {
    std::vector<HingeTerm> out;
    for (auto [lo, hi] : intervals) append_terms(out, IntervalTarget(lo, hi), margin, kind);
    return out;
}

}  // namespace

TEST_CASE("fresh solver") {
    for (auto kind : {LossKind::Linear, LossKind::Squared}) {
        HingeSolver s(kind, kind == LossKind::Linear ? 1.0 : 0.0);
        CHECK(s.size() == 0);
        CHECK(s.current_piece() == PieceCoefficients{});
        CHECK(s.pointer_moves() == 0);
        const auto r = s.query_min();
        CHECK(r.min_value == 0.0);
        CHECK(r.argmin_lo == -kInf);
        CHECK(r.argmin_hi == kInf);
        CHECK(r.predicted_mu == 0.0);
    }
}

TEST_CASE("solver rejects bad configuration and mismatched terms") {
    CHECK_THROWS_AS(HingeSolver(LossKind::Linear, -0.5), std::invalid_argument);
    HingeSolver s(LossKind::Linear, 1.0);
    CHECK_THROWS_AS(s.insert({1, 0.0, 1.0, LossKind::Squared}), std::invalid_argument);
    CHECK_THROWS_AS(s.insert({1, 0.0, 0.5, LossKind::Linear}), std::invalid_argument);
    CHECK_THROWS_AS(s.insert({1, kInf, 1.0, LossKind::Linear}), std::invalid_argument);
    CHECK(s.size() == 0);
}

TEST_CASE("two-step linear trace with margin 1") {
    HingeSolver s(LossKind::Linear, 1.0);

    auto r = s.insert({+1, 4.0, 1.0, LossKind::Linear});
    auto bps = s.breakpoints();
    REQUIRE(bps.size() == 1);
    CHECK(bps[0].position == 3.0);
    CHECK(bps[0].diff == PieceCoefficients{0.0, 1.0, -3.0});
    CHECK(s.last_insert_moves() == 1);
    CHECK(s.pointer_index() == 1);
    CHECK(r.min_value == 0.0);
    CHECK(r.argmin_lo == -kInf);
    CHECK(r.argmin_hi == 3.0);
    CHECK(r.predicted_mu == 3.0);

    r = s.insert({-1, 1.0, 1.0, LossKind::Linear});
    bps = s.breakpoints();
    REQUIRE(bps.size() == 2);
    CHECK(bps[0].position == 2.0);
    CHECK(bps[0].diff == PieceCoefficients{0.0, 1.0, -2.0});
    CHECK(s.last_insert_moves() == 0);
    CHECK(s.pointer_moves() == 1);
    CHECK(s.pointer_index() == 2);
    CHECK(s.current_piece() == PieceCoefficients{});
    CHECK(r.min_value == 0.0);
    CHECK(r.argmin_lo == 2.0);
    CHECK(r.argmin_hi == 3.0);
    CHECK(r.predicted_mu == 2.5);
}

TEST_CASE("query_min on two disjoint intervals") {
    const std::vector<std::pair<double, double>> intervals{{2.0, 3.0}, {0.0, 1.0}};
    SUBCASE("squared: (2 - mu)^2 + (mu - 1)^2 minimized at 1.5") {
        HingeSolver s(LossKind::Squared, 0.0);
        const auto terms = interval_terms(intervals, 0.0, LossKind::Squared);
        const auto r = insert_all(s, terms);
        CHECK(r.min_value == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.predicted_mu == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(oracle::close(r.min_value, oracle::brute_min(terms)));
    }
    SUBCASE("linear: constant 1 on [1, 2]") {
        HingeSolver s(LossKind::Linear, 0.0);
        const auto terms = interval_terms(intervals, 0.0, LossKind::Linear);
        const auto r = insert_all(s, terms);
        CHECK(r.min_value == 1.0);
        CHECK(r.argmin_lo == 1.0);
        CHECK(r.argmin_hi == 2.0);
        CHECK(r.predicted_mu == 1.5);
        CHECK(oracle::close(r.min_value, oracle::brute_min(terms)));
    }
}

TEST_CASE("tie-break on one-sided minimizer sets") {
    HingeSolver s(LossKind::Squared, 0.0);
    const auto r = s.insert({-1, 4.0, 0.0, LossKind::Squared});
    CHECK(r.argmin_lo == 4.0);
    CHECK(r.argmin_hi == kInf);
    CHECK(r.predicted_mu == 4.0);
}

TEST_CASE("coincident breakpoints merge") {
    HingeSolver s(LossKind::Linear, 0.0);
    s.insert({+1, 1.0, 0.0, LossKind::Linear});
    s.insert({+1, 1.0, 0.0, LossKind::Linear});
    s.insert({-1, 1.0, 0.0, LossKind::Linear});
    const auto bps = s.breakpoints();
    REQUIRE(bps.size() == 1);
    CHECK(bps[0].multiplicity == 3);
    CHECK(bps[0].diff == PieceCoefficients{0.0, 3.0, -3.0});
    CHECK(s.size() == 3);
    const auto r = s.query_min();
    CHECK(r.min_value == 0.0);
    CHECK(r.predicted_mu == 1.0);
}

TEST_CASE("opposite squared terms at one position leave a zero difference") {
    HingeSolver s(LossKind::Squared, 0.0);
    s.insert({+1, 5.0, 0.0, LossKind::Squared});
    s.insert({-1, 1.0, 0.0, LossKind::Squared});
    s.insert({+1, 3.0, 0.0, LossKind::Squared});
    s.insert({-1, 3.0, 0.0, LossKind::Squared});
    const auto bps = s.breakpoints();
    REQUIRE(bps.size() == 3);
    CHECK(bps[1].diff == PieceCoefficients{});
    // (mu - 3)^2 on both sides of 3
    const auto r = s.query_min();
    CHECK(r.min_value == 0.0);
    CHECK(r.argmin_lo == 3.0);
    CHECK(r.argmin_hi == 3.0);
}

TEST_CASE("fifty random squared terms track the brute-force oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> margin(0.0, 2.0);
    for (int seq = 0; seq < 20; ++seq) {
        const double eps = margin(rng);
        const auto terms = oracle::random_terms(rng, 50, LossKind::Squared, eps, false);
        HingeSolver s(LossKind::Squared, eps);
        std::vector<HingeTerm> prefix;
        for (const auto& t : terms) {
            prefix.push_back(t);
            const auto r = s.insert(t);
            CHECK(oracle::close(r.min_value, oracle::brute_min(prefix)));
        }
    }
}

TEST_CASE("sorted-prefix oracle agrees with the brute-force oracle") {
    std::mt19937_64 rng(99);
    for (int seq = 0; seq < 300; ++seq) {
        const auto kind = seq % 2 ? LossKind::Linear : LossKind::Squared;
        const double eps = std::array{0.0, 0.5, 1.0, 2.0}[seq % 4];
        const auto terms = oracle::random_terms(rng, 1 + seq % 60, kind, eps, seq % 3 == 0);
        CHECK(oracle::close(oracle::sorted_min(terms), oracle::brute_min(terms), 1e-10));
    }
}

TEST_CASE("solver invariants over random insertion sequences") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> length(1, 300);
    for (int seq = 0; seq < 120; ++seq) {
        const auto kind = seq % 2 ? LossKind::Linear : LossKind::Squared;
        const double eps = std::array{0.0, 0.5, 1.0, 2.0}[(seq / 2) % 4];
        const auto terms = oracle::random_terms(rng, length(rng), kind, eps, seq % 3 == 0);

        HingeSolver s(kind, eps);
        std::vector<HingeTerm> prefix;
        double previous = 0.0;
        for (const auto& t : terms) {
            prefix.push_back(t);
            const auto r = s.insert(t);
            // oracle equivalence
            CHECK(oracle::close(r.min_value, oracle::sorted_min(prefix)));
            // monotone under insertion
            CHECK(r.min_value >= previous - 1e-9 * std::max(1.0, previous));
            previous = r.min_value;
            // convexity bookkeeping
            CHECK(s.current_piece().a >= 0.0);
            if (kind == LossKind::Linear) {
                CHECK(s.current_piece().a == 0.0);
                CHECK(s.last_insert_moves() <= 1);
            }
            CHECK(r.argmin_lo <= r.predicted_mu);
            CHECK(r.predicted_mu <= r.argmin_hi);
            // the reported point attains the minimum of the explicit sum
            CHECK(oracle::close(oracle::hinge_sum(prefix, r.predicted_mu), r.min_value, 1e-8));
        }
        std::size_t total = 0;
        for (const auto& b : s.breakpoints()) total += b.multiplicity;
        CHECK(total == s.size());
    }
}

TEST_CASE("pointer piece is the rightmost minimizing piece") {
    std::mt19937_64 rng(31);
    for (int seq = 0; seq < 60; ++seq) {
        const auto kind = seq % 2 ? LossKind::Linear : LossKind::Squared;
        const auto terms = oracle::random_terms(rng, 40, kind, 0.5, seq % 2 == 0);
        HingeSolver s(kind, 0.5);
        std::vector<HingeTerm> prefix;
        for (const auto& t : terms) {
            prefix.push_back(t);
            const auto r = s.insert(t);
            const auto bps = s.breakpoints();
            const std::size_t j = s.pointer_index();
            const double lo = j == 1 ? -kInf : bps[j - 2].position;
            const double hi = j == bps.size() + 1 ? kInf : bps[j - 1].position;
            // some minimizer lies in (lo, hi]
            CHECK(r.argmin_hi > lo);
            CHECK(r.argmin_lo <= hi);
            // nothing right of the piece is minimal
            if (std::isfinite(hi)) {
                CHECK(oracle::hinge_sum(prefix, hi + 1e-3) > r.min_value + 1e-12);
            }
        }
    }
}

TEST_CASE("pieces rebuilt from differences match pointwise evaluation") {
    std::mt19937_64 rng(3);
    for (int seq = 0; seq < 60; ++seq) {
        const auto kind = seq % 2 ? LossKind::Linear : LossKind::Squared;
        const bool only_upper = seq % 3 == 0;
        auto terms = oracle::random_terms(rng, 30, kind, 1.0, seq % 4 == 0);
        if (only_upper) {
            for (auto& t : terms) t.sign = 1;
        }
        HingeSolver s(kind, 1.0);
        insert_all(s, terms);
        const auto pieces = s.reconstruct_pieces();
        const auto bps = s.breakpoints();
        REQUIRE(pieces.size() == bps.size() + 1);
        if (only_upper) {
            CHECK(pieces.front().a == 0.0);
            CHECK(pieces.front().b == 0.0);
            CHECK(pieces.front().c == doctest::Approx(0.0));
        }
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            const double at = k == 0                ? bps.front().position - 1.0
                              : k == bps.size()     ? bps.back().position + 1.0
                                                    : (bps[k - 1].position + bps[k].position) / 2.0;
            CHECK(oracle::close(pieces[k](at), oracle::hinge_sum(terms, at), 1e-9));
        }
    }
}

TEST_CASE("insertion order does not change the minimum") {
    std::mt19937_64 rng(17);
    for (int seq = 0; seq < 80; ++seq) {
        const auto kind = seq % 2 ? LossKind::Linear : LossKind::Squared;
        auto terms = oracle::random_terms(rng, 60, kind, 0.5, seq % 2 == 0);
        HingeSolver a(kind, 0.5);
        const auto ra = insert_all(a, terms);
        std::shuffle(terms.begin(), terms.end(), rng);
        HingeSolver b(kind, 0.5);
        const auto rb = insert_all(b, terms);
        CHECK(oracle::close(ra.min_value, rb.min_value));
        CHECK(oracle::close(ra.argmin_lo, rb.argmin_lo));
        CHECK(oracle::close(ra.argmin_hi, rb.argmin_hi));
        CHECK(oracle::close(ra.predicted_mu, rb.predicted_mu));
    }
}

TEST_CASE("copies and moves keep a usable pointer") {
    HingeSolver s(LossKind::Linear, 0.0);
    s.insert({+1, 3.0, 0.0, LossKind::Linear});
    s.insert({-1, 1.0, 0.0, LossKind::Linear});
    HingeSolver copy = s;
    HingeSolver moved = std::move(s);
    for (HingeSolver* x : {&copy, &moved}) {
        CHECK(x->pointer_index() == 2);
        const auto r = x->insert({+1, 2.0, 0.0, LossKind::Linear});
        CHECK(r.min_value == 0.0);
        CHECK(r.argmin_lo == 1.0);
        CHECK(r.argmin_hi == 2.0);
    }
}
