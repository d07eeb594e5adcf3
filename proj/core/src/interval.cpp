#include "mmit/interval.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mmit {

std::string_view to_string(LossKind kind) {
    return kind == LossKind::Linear ? "linear" : "squared";
}

LossKind parse_loss_kind(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "linear") return LossKind::Linear;
    if (lowered == "squared") return LossKind::Squared;
    throw std::invalid_argument("unknown loss kind '" + std::string(name) +
                                "' (expected linear or squared)");
}

IntervalTarget::IntervalTarget(double lower, double upper) : lower_{lower}, upper_{upper} {
    if (std::isnan(lower) || std::isnan(upper)) {
        throw std::invalid_argument("interval limit is NaN");
    }
    if (!(lower < upper)) {
        std::ostringstream s;
        s << "interval requires lower < upper, got [" << lower << ", " << upper << "]";
        throw std::invalid_argument(s.str());
    }
}

Dataset::Dataset(std::vector<Example> examples, std::vector<std::string> feature_names)
    : examples_{std::move(examples)}, feature_names_{std::move(feature_names)} {
    for (std::size_t i = 0; i < examples_.size(); ++i) {
        const auto& x = examples_[i].features;
        if (x.size() != feature_names_.size()) {
            std::ostringstream s;
            s << "example " << i << " has " << x.size() << " features, expected "
              << feature_names_.size();
            throw std::invalid_argument(s.str());
        }
        for (double v : x) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("example " + std::to_string(i) +
                                            " has a non-finite feature value");
            }
        }
    }
}

std::vector<IntervalTarget> Dataset::targets() const {
    std::vector<IntervalTarget> out;
    out.reserve(examples_.size());
    for (const auto& e : examples_) out.push_back(e.target);
    return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
    std::vector<Example> picked;
    picked.reserve(indices.size());
    for (auto i : indices) picked.push_back(examples_.at(i));
    Dataset out;
    out.examples_ = std::move(picked);
    out.feature_names_ = feature_names_;
    return out;
}

std::vector<std::string> default_feature_names(std::size_t p) {
    std::vector<std::string> names;
    names.reserve(p);
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
    return names;
}

double hinge_value(const HingeTerm& term, double mu) {
    const double x = term.sign * (mu - term.limit) + term.margin;
    if (x <= 0.0) return 0.0;
    return term.kind == LossKind::Linear ? x : x * x;
}

void append_terms(std::vector<HingeTerm>& out, const IntervalTarget& target, double margin,
                  LossKind kind) {
    if (std::isfinite(target.lower())) out.push_back({-1, target.lower(), margin, kind});
    if (std::isfinite(target.upper())) out.push_back({+1, target.upper(), margin, kind});
}

std::vector<HingeTerm> terms_of_example(const IntervalTarget& target, double margin,
                                        LossKind kind) {
    std::vector<HingeTerm> out;
    append_terms(out, target, margin, kind);
    return out;
}

double hinge_cost(const std::vector<IntervalTarget>& targets, double mu, double margin,
                  LossKind kind) {
    double total = 0.0;
    for (const auto& t : targets) {
        for (const auto& term : terms_of_example(t, margin, kind)) total += hinge_value(term, mu);
    }
    return total;
}

}  // namespace mmit
