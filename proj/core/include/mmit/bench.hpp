#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mmit/interval.hpp"

namespace mmit {

/// Outcome of inserting a whole term sequence into one solver.
struct SweepStats {
    std::size_t n_terms = 0;
    std::size_t total_moves = 0;
    std::size_t max_moves_per_insert = 0;
    double final_min = 0.0;
    double seconds = 0.0;

    double mean_moves() const {
        return n_terms ? static_cast<double>(total_moves) / static_cast<double>(n_terms) : 0.0;
    }
};

/// Terms of every target, in dataset order.
std::vector<HingeTerm> dataset_terms(const Dataset& data, double margin, LossKind kind);

SweepStats run_solver_sweep(const std::vector<HingeTerm>& terms, LossKind kind, double margin);

struct BenchRow {
    std::size_t n = 0;
    LossKind kind = LossKind::Linear;
    double margin = 0.0;
    SweepStats stats;  // seconds holds the median over repeats
};

/// Generates n synthetic limits and sweeps them `repeats` times.
BenchRow bench_size(std::size_t n, LossKind kind, double margin, std::uint64_t seed,
                    std::size_t repeats = 3);

/// Header: n,loss,margin,total_moves,mean_moves,max_moves,final_min,seconds
void write_bench_report(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace mmit
