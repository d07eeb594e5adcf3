#include "mmit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <stdexcept>

#include "mmit/data_io.hpp"
#include "mmit/solver.hpp"

namespace mmit {

std::vector<HingeTerm> dataset_terms(const Dataset& data, double margin, LossKind kind) {
    std::vector<HingeTerm> terms;
    terms.reserve(2 * data.size());
    for (const auto& e : data.examples()) append_terms(terms, e.target, margin, kind);
    return terms;
}

SweepStats run_solver_sweep(const std::vector<HingeTerm>& terms, LossKind kind, double margin) {
    SweepStats stats;
    const auto start = std::chrono::steady_clock::now();
    HingeSolver solver(kind, margin);
    MinResult last;
    for (const auto& t : terms) {
        last = solver.insert(t);
        stats.max_moves_per_insert = std::max(stats.max_moves_per_insert, solver.last_insert_moves());
    }
    const auto stop = std::chrono::steady_clock::now();
    stats.n_terms = terms.size();
    stats.total_moves = solver.pointer_moves();
    stats.final_min = last.min_value;
    stats.seconds = std::chrono::duration<double>(stop - start).count();
    return stats;
}

BenchRow bench_size(std::size_t n, LossKind kind, double margin, std::uint64_t seed,
                    std::size_t repeats) {
    if (repeats == 0) throw std::invalid_argument("bench needs at least one repeat");
    const auto terms = dataset_terms(generate_bench_limits(n, seed), margin, kind);
    std::vector<SweepStats> runs;
    runs.reserve(repeats);
    for (std::size_t r = 0; r < repeats; ++r) runs.push_back(run_solver_sweep(terms, kind, margin));
    std::vector<double> times;
    for (const auto& s : runs) times.push_back(s.seconds);
    std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2),
                     times.end());
    BenchRow row{n, kind, margin, runs.front()};
    row.stats.seconds = times[times.size() / 2];
    return row;
}

void write_bench_report(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "n,loss,margin,total_moves,mean_moves,max_moves,final_min,seconds\n";
    for (const auto& r : rows) {
        out << r.n << ',' << to_string(r.kind) << ',' << format_double(r.margin) << ','
            << r.stats.total_moves << ',' << format_double(r.stats.mean_moves()) << ','
            << r.stats.max_moves_per_insert << ',' << format_double(r.stats.final_min) << ','
            << format_double(r.stats.seconds) << '\n';
    }
}

}  // namespace mmit
