#include "mmit/data_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace mmit {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos
                                                                             : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

bool blank(const std::string& line) { return trim(line).empty(); }

std::string at_row(const std::string& source, std::size_t row) {
    return source + ": row " + std::to_string(row) + ": ";
}

struct Header {
    std::vector<std::string> names;
    std::optional<std::size_t> lower;
    std::optional<std::size_t> upper;
    std::vector<std::size_t> feature_columns;
};

Header parse_header(const std::string& line, const std::string& source) {
    Header h;
    const auto fields = split_fields(line);
    for (std::size_t c = 0; c < fields.size(); ++c) {
        const std::string name(fields[c]);
        const auto key = lowercase(name);
        if (key == "lower" || key == "upper") {
            auto& slot = key == "lower" ? h.lower : h.upper;
            if (slot) {
                throw CsvError(CsvError::Kind::MissingColumn, 0,
                               source + ": duplicate '" + key + "' column");
            }
            slot = c;
        } else {
            h.feature_columns.push_back(c);
            h.names.push_back(name);
        }
    }
    return h;
}

std::vector<std::string_view> row_fields(const std::string& line, std::size_t expected,
                                         const std::string& source, std::size_t row) {
    auto fields = split_fields(line);
    if (fields.size() != expected) {
        throw CsvError(CsvError::Kind::RaggedRow, row,
                       at_row(source, row) + "expected " + std::to_string(expected) +
                           " fields, found " + std::to_string(fields.size()));
    }
    return fields;
}

double feature_cell(std::string_view cell, const std::string& column, const std::string& source,
                    std::size_t row) {
    double v = 0.0;
    if (!parse_double(cell, v) || !std::isfinite(v)) {
        throw CsvError(CsvError::Kind::NonNumeric, row,
                       at_row(source, row) + "feature '" + column + "' has non-numeric value '" +
                           std::string(cell) + "'");
    }
    return v;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError(CsvError::Kind::Io, 0, "cannot open '" + path + "'");
    return in;
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    const auto key = lowercase(text);
    if (key == "inf" || key == "+inf" || key == "infinity" || key == "+infinity") {
        out = kInf;
        return true;
    }
    if (key == "-inf" || key == "-infinity") {
        out = -kInf;
        return true;
    }
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && !std::isnan(out);
}

Dataset read_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!next_line(in, line)) {
        throw CsvError(CsvError::Kind::MissingColumn, 0, source + ": missing header row");
    }
    const auto header = parse_header(line, source);
    if (!header.lower || !header.upper) {
        throw CsvError(CsvError::Kind::MissingColumn, 0,
                       source + ": header must contain 'lower' and 'upper' columns");
    }
    const std::size_t width = header.names.size() + 2;

    std::vector<Example> examples;
    std::size_t row = 0;
    while (next_line(in, line)) {
        if (blank(line)) continue;
        ++row;
        const auto fields = row_fields(line, width, source, row);
        std::vector<double> x;
        x.reserve(header.feature_columns.size());
        for (std::size_t k = 0; k < header.feature_columns.size(); ++k) {
            x.push_back(feature_cell(fields[header.feature_columns[k]], header.names[k], source, row));
        }
        double lo = 0.0, hi = 0.0;
        if (!parse_double(fields[*header.lower], lo)) {
            throw CsvError(CsvError::Kind::NonNumeric, row,
                           at_row(source, row) + "lower limit '" +
                               std::string(fields[*header.lower]) + "' is not a number");
        }
        if (!parse_double(fields[*header.upper], hi)) {
            throw CsvError(CsvError::Kind::NonNumeric, row,
                           at_row(source, row) + "upper limit '" +
                               std::string(fields[*header.upper]) + "' is not a number");
        }
        if (!(lo < hi)) {
            throw CsvError(CsvError::Kind::InvalidInterval, row,
                           at_row(source, row) + "lower (" + format_double(lo) +
                               ") must be strictly less than upper (" + format_double(hi) + ")");
        }
        examples.push_back({std::move(x), IntervalTarget(lo, hi)});
    }
    return Dataset(std::move(examples), header.names);
}

Dataset load_csv(const std::string& path) {
    auto in = open_input(path);
    return read_csv(in, path);
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (const auto& name : data.feature_names()) out << name << ',';
    out << "lower,upper\n";
    for (const auto& e : data.examples()) {
        for (double v : e.features) out << format_double(v) << ',';
        out << format_double(e.target.lower()) << ',' << format_double(e.target.upper()) << '\n';
    }
}

void save_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError(CsvError::Kind::Io, 0, "cannot open '" + path + "' for writing");
    write_csv(out, data);
    if (!out) throw CsvError(CsvError::Kind::Io, 0, "failed writing '" + path + "'");
}

FeatureTable read_feature_csv(std::istream& in, const std::string& source) {
    FeatureTable table;
    std::string line;
    while (next_line(in, line)) {
        if (!blank(line)) break;
    }
    if (blank(line)) return table;
    const auto header = parse_header(line, source);
    table.names = header.names;
    const std::size_t width =
        header.names.size() + (header.lower ? 1 : 0) + (header.upper ? 1 : 0);

    std::size_t row = 0;
    while (next_line(in, line)) {
        if (blank(line)) continue;
        ++row;
        const auto fields = row_fields(line, width, source, row);
        std::vector<double> x;
        x.reserve(header.feature_columns.size());
        for (std::size_t k = 0; k < header.feature_columns.size(); ++k) {
            x.push_back(feature_cell(fields[header.feature_columns[k]], header.names[k], source, row));
        }
        table.rows.push_back(std::move(x));
    }
    return table;
}

FeatureTable load_feature_csv(const std::string& path) {
    auto in = open_input(path);
    return read_feature_csv(in, path);
}

std::vector<IntervalTarget> censor_transform(const std::vector<double>& values,
                                             const CensorScheme& scheme, std::uint64_t seed) {
    const auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!probability(scheme.p_left) || !probability(scheme.p_right)) {
        throw std::invalid_argument("censoring probabilities must lie in [0, 1]");
    }
    if (!(scheme.width_min >= 0.0) || !(scheme.width_max >= scheme.width_min) ||
        !(scheme.width_max > 0.0) || !std::isfinite(scheme.width_max)) {
        throw std::invalid_argument("width range must satisfy 0 <= min <= max, max > 0");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> width(scheme.width_min, scheme.width_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<IntervalTarget> out;
    out.reserve(values.size());
    for (double y : values) {
        if (!std::isfinite(y)) throw std::invalid_argument("censor_transform needs finite values");
        double w_lo = width(rng);
        double w_hi = width(rng);
        // Zero total width can only come from a width range touching 0.
        if (w_lo + w_hi == 0.0) w_hi = scheme.width_max;
        double lo = y - w_lo;
        double hi = y + w_hi;
        if (unit(rng) < scheme.p_left) lo = -kInf;
        if (unit(rng) < scheme.p_right) hi = kInf;
        out.emplace_back(lo, hi);
    }
    return out;
}

std::string_view to_string(SimPattern pattern) {
    switch (pattern) {
        case SimPattern::Sin: return "sin";
        case SimPattern::Abs: return "abs";
        case SimPattern::Linear: return "linear";
    }
    return "linear";
}

SimPattern parse_sim_pattern(std::string_view name) {
    const auto key = lowercase(name);
    if (key == "sin") return SimPattern::Sin;
    if (key == "abs") return SimPattern::Abs;
    if (key == "linear") return SimPattern::Linear;
    throw std::invalid_argument("unknown pattern '" + std::string(name) +
                                "' (expected sin, abs or linear)");
}

double pattern_value(SimPattern pattern, double signal) {
    switch (pattern) {
        case SimPattern::Sin: return std::sin(signal);
        case SimPattern::Abs: return std::abs(signal - 5.0);
        case SimPattern::Linear: return signal / 5.0;
    }
    return 0.0;
}

void SimSpec::validate() const {
    if (n == 0) throw std::invalid_argument("simulation needs n >= 1");
    if (p == 0) throw std::invalid_argument("simulation needs p >= 1");
    if (!(noise_shift_sd >= 0.0)) throw std::invalid_argument("noise sd must be nonnegative");
    if (!(width_range.first > 0.0) || !(width_range.second >= width_range.first)) {
        throw std::invalid_argument("width range must satisfy 0 < min <= max");
    }
    if (!(feature_range.second > feature_range.first)) {
        throw std::invalid_argument("feature range must satisfy min < max");
    }
}

Dataset simulate(const SimSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> feature(spec.feature_range.first,
                                                   spec.feature_range.second);
    std::normal_distribution<double> shift(0.0, spec.noise_shift_sd > 0.0 ? spec.noise_shift_sd : 1.0);
    std::uniform_real_distribution<double> width(spec.width_range.first, spec.width_range.second);

    std::vector<Example> examples;
    examples.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        std::vector<double> x(spec.p);
        for (auto& v : x) v = feature(rng);
        double center = pattern_value(spec.pattern, x[0]);
        if (spec.noise_shift_sd > 0.0) center += shift(rng);
        const double half = (spec.width_range.first == spec.width_range.second
                                 ? spec.width_range.first
                                 : width(rng)) /
                            2.0;
        examples.push_back({std::move(x), IntervalTarget(center - half, center + half)});
    }
    return Dataset(std::move(examples), default_feature_names(spec.p));
}

Dataset generate_bench_limits(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_bench_limits needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> core(-1.0, 1.0);
    std::uniform_real_distribution<double> half_width(0.01, 0.5);

    const auto center = [&] {
        const double c = core(rng);
        return unit(rng) < 0.1 ? 10.0 * c : c;
    };

    std::vector<Example> examples;
    examples.reserve(n / 2 + 1);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double c = center();
        const double w = half_width(rng);
        examples.push_back({{static_cast<double>(i)}, IntervalTarget(c - w, c + w)});
    }
    if (n % 2 == 1) {
        examples.push_back({{static_cast<double>(n / 2)}, IntervalTarget(center(), kInf)});
    }
    return Dataset(std::move(examples), {"x0"});
}

std::size_t count_finite_limits(const Dataset& data) {
    std::size_t count = 0;
    for (const auto& e : data.examples()) {
        count += std::isfinite(e.target.lower()) ? 1 : 0;
        count += std::isfinite(e.target.upper()) ? 1 : 0;
    }
    return count;
}

}  // namespace mmit
