#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LossKind { Linear, Squared };

std::string_view to_string(LossKind kind);

/// Parses "linear" / "squared" (case-insensitive). Throws std::invalid_argument.
LossKind parse_loss_kind(std::string_view name);

/// Target interval over the extended reals. lower may be -inf (left-censored),
/// upper may be +inf (right-censored). lower < upper always holds.
class IntervalTarget {
public:
    IntervalTarget(double lower, double upper);

    double lower() const { return lower_; }
    double upper() const { return upper_; }

    bool left_censored() const { return std::isinf(lower_); }
    bool right_censored() const { return std::isinf(upper_); }
    bool contains(double y) const { return lower_ <= y && y <= upper_; }

    friend bool operator==(const IntervalTarget&, const IntervalTarget&) = default;

private:
    double lower_;
    double upper_;
};

struct Example {
    std::vector<double> features;
    IntervalTarget target;
};

/// Ordered examples sharing one feature dimension.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Example> examples, std::vector<std::string> feature_names);

    std::size_t size() const { return examples_.size(); }
    bool empty() const { return examples_.empty(); }
    std::size_t n_features() const { return feature_names_.size(); }

    const std::vector<Example>& examples() const { return examples_; }
    const Example& operator[](std::size_t i) const { return examples_[i]; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }

    std::vector<IntervalTarget> targets() const;

    /// Examples at the given indices, in the given order.
    Dataset subset(const std::vector<std::size_t>& indices) const;

private:
    std::vector<Example> examples_;
    std::vector<std::string> feature_names_;
};

/// Default feature names x0, x1, ...
std::vector<std::string> default_feature_names(std::size_t p);

/// One summand phi(sign * (mu - limit) + margin). sign = -1 is a lower-limit
/// term, sign = +1 an upper-limit term.
struct HingeTerm {
    int sign;
    double limit;
    double margin;
    LossKind kind;

    /// Point where the term switches between zero and nonzero.
    double breakpoint() const { return limit - sign * margin; }

    friend bool operator==(const HingeTerm&, const HingeTerm&) = default;
};

double hinge_value(const HingeTerm& term, double mu);

/// 0 to 2 terms; infinite limits produce nothing.
std::vector<HingeTerm> terms_of_example(const IntervalTarget& target, double margin, LossKind kind);

/// Appends the terms of every target in order.
void append_terms(std::vector<HingeTerm>& out, const IntervalTarget& target, double margin,
                  LossKind kind);

/// Sum of both hinge terms of each target at a common prediction mu.
double hinge_cost(const std::vector<IntervalTarget>& targets, double mu, double margin,
                  LossKind kind);

}  // namespace mmit
