#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxconv {

using Outcome = std::int64_t;

// Thrown when a distribution has no positive mass to normalize against.
class DegenerateDistribution : public std::domain_error {
public:
    DegenerateDistribution() : std::domain_error("degenerate distribution") {}
};

class ShapeMismatch : public std::invalid_argument {
public:
    explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Nonnegative mass vector over a contiguous run of integer outcomes.
// Outcome i is stored at values()[i - offset()]. Masses need not sum to one:
// the same type carries probabilities, likelihoods and intermediate messages.
class Pmf {
public:
    Pmf(std::vector<double> values, Outcome offset = 0);

    static Pmf delta(Outcome outcome = 0, double mass = 1.0);

    Outcome offset() const noexcept { return offset_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    Outcome firstOutcome() const noexcept { return offset_; }
    Outcome lastOutcome() const noexcept {
        return offset_ + static_cast<Outcome>(values_.size()) - 1;
    }

    // Mass at an outcome; zero outside the stored range.
    double at(Outcome outcome) const noexcept;

    double sum() const noexcept;
    double max() const noexcept;
    // Index into values() of the largest element; ties go to the lowest index.
    std::size_t argmaxIndex() const noexcept;
    Outcome argmaxOutcome() const noexcept {
        return offset_ + static_cast<Outcome>(argmaxIndex());
    }
    bool allZero() const noexcept;

    std::vector<double> release() && { return std::move(values_); }

    friend bool operator==(const Pmf&, const Pmf&) = default;

private:
    std::vector<double> values_;
    Outcome offset_;
};

Pmf normalizeSum(const Pmf& p);
Pmf normalizeMax(const Pmf& p);

// Distribution of -X: values reversed, outcome i maps to outcome -i.
Pmf negate(const Pmf& p);

// Exact O(kL * kR) oracles.
Pmf naiveConvolve(const Pmf& left, const Pmf& right);
Pmf naiveMaxConvolve(const Pmf& left, const Pmf& right);

// Per-index |numerical - exact| / exact. Entries where exact is zero are
// undefined (std::nullopt) and excluded from every aggregate.
struct ErrorReport {
    std::vector<std::optional<double>> perIndexRelAbsError;
    std::vector<double> exactValues;

    std::size_t undefinedCount() const noexcept;
    std::vector<double> definedErrors() const;
    double maxError() const;
    double meanError() const;
    double medianError() const;
};

ErrorReport relativeAbsoluteError(const Pmf& numerical, const Pmf& exact);

}  // namespace maxconv
