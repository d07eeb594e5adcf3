#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmit/interval.hpp"

namespace mmit {

class CsvError : public std::runtime_error {
public:
    enum class Kind { Io, MissingColumn, RaggedRow, NonNumeric, InvalidInterval };

    CsvError(Kind kind, std::size_t row, const std::string& message)
        : std::runtime_error(message), kind_{kind}, row_{row} {}

    Kind kind() const { return kind_; }
    /// 1-based data row (header excluded); 0 when the error is not tied to a row.
    std::size_t row() const { return row_; }

private:
    Kind kind_;
    std::size_t row_;
};

/// Shortest decimal text that parses back to the same double; "inf" / "-inf"
/// for infinities.
std::string format_double(double v);

/// Parses a number, accepting inf / -inf / +inf / infinity in any case.
/// Returns false when the text is not entirely a number.
bool parse_double(std::string_view text, double& out);

/// Interval dataset CSV: header row, `lower` and `upper` columns, every other
/// column a numeric feature. Row order is preserved.
Dataset read_csv(std::istream& in, const std::string& source = "<stream>");
Dataset load_csv(const std::string& path);

/// Features first, then lower, upper.
void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::string& path, const Dataset& data);

/// Feature-only table for prediction; `lower`/`upper` columns are ignored if
/// present. An empty file gives an empty table.
struct FeatureTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
};
FeatureTable read_feature_csv(std::istream& in, const std::string& source = "<stream>");
FeatureTable load_feature_csv(const std::string& path);

/// Turns exact values into intervals [y - w_lo, y + w_hi], widths uniform in
/// [width_min, width_max], then drops the lower / upper limit to -inf / +inf
/// with probability p_left / p_right.
struct CensorScheme {
    double width_min = 0.5;
    double width_max = 1.5;
    double p_left = 0.0;
    double p_right = 0.0;
};
std::vector<IntervalTarget> censor_transform(const std::vector<double>& values,
                                             const CensorScheme& scheme, std::uint64_t seed);

enum class SimPattern { Sin, Abs, Linear };
std::string_view to_string(SimPattern pattern);
SimPattern parse_sim_pattern(std::string_view name);
double pattern_value(SimPattern pattern, double signal);

/// Simulated interval data driven by feature 0; features 1..p-1 are noise.
/// Each target is [c - w/2, c + w/2] with c = f(x0) + Normal(0, noise_shift_sd)
/// and full width w uniform over width_range.
struct SimSpec {
    SimPattern pattern = SimPattern::Linear;
    std::size_t n = 200;
    std::size_t p = 20;
    std::uint64_t seed = 0;
    double noise_shift_sd = 0.1;
    std::pair<double, double> width_range{0.2, 1.0};
    std::pair<double, double> feature_range{0.0, 10.0};

    void validate() const;
};
Dataset simulate(const SimSpec& spec);

/// Single-feature dataset whose targets carry exactly n finite limits. Centers
/// come from a uniform core with 10% outliers at ten times the scale.
Dataset generate_bench_limits(std::size_t n, std::uint64_t seed);

/// Number of finite interval limits over all targets.
std::size_t count_finite_limits(const Dataset& data);

}  // namespace mmit
