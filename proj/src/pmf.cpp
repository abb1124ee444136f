#include "maxconv/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace maxconv {

Pmf::Pmf(std::vector<double> values, Outcome offset)
    : values_(std::move(values)), offset_(offset) {
    if (values_.empty()) {
        throw std::invalid_argument("Pmf requires at least one value");
    }
    // NaN fails both comparisons.
    bool valid = true;
    for (double v : values_) {
        valid &= v >= 0.0 && v <= std::numeric_limits<double>::max();
    }
    if (!valid) {
        throw std::invalid_argument("Pmf values must be finite and nonnegative");
    }
}

Pmf Pmf::delta(Outcome outcome, double mass) {
    return Pmf({mass}, outcome);
}

double Pmf::at(Outcome outcome) const noexcept {
    if (outcome < firstOutcome() || outcome > lastOutcome()) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(outcome - offset_)];
}

double Pmf::sum() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double Pmf::max() const noexcept {
    return *std::max_element(values_.begin(), values_.end());
}

std::size_t Pmf::argmaxIndex() const noexcept {
    // max_element returns the first maximum, which is the lowest index.
    return static_cast<std::size_t>(
        std::max_element(values_.begin(), values_.end()) - values_.begin());
}

bool Pmf::allZero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

namespace {

Pmf scaled(const Pmf& p, double divisor) {
    std::vector<double> out(p.values().begin(), p.values().end());
    for (double& v : out) {
        v /= divisor;
    }
    return Pmf(std::move(out), p.offset());
}

}  // namespace

Pmf normalizeSum(const Pmf& p) {
    const double total = p.sum();
    if (!(total > 0.0)) {
        throw DegenerateDistribution();
    }
    return scaled(p, total);
}

Pmf normalizeMax(const Pmf& p) {
    const double peak = p.max();
    if (!(peak > 0.0)) {
        throw DegenerateDistribution();
    }
    // Dividing the peak by itself yields exactly 1.
    return scaled(p, peak);
}

Pmf negate(const Pmf& p) {
    std::vector<double> out(p.values().rbegin(), p.values().rend());
    return Pmf(std::move(out), -p.lastOutcome());
}

Pmf naiveConvolve(const Pmf& left, const Pmf& right) {
    const auto a = left.values();
    const auto b = right.values();
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        double* row = out.data() + i;
        for (std::size_t j = 0; j < b.size(); ++j) {
            row[j] += ai * b[j];
        }
    }
    return Pmf(std::move(out), left.offset() + right.offset());
}

Pmf naiveMaxConvolve(const Pmf& left, const Pmf& right) {
    const auto a = left.values();
    const auto b = right.values();
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        double* row = out.data() + i;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double prod = ai * b[j];
            row[j] = row[j] < prod ? prod : row[j];
        }
    }
    return Pmf(std::move(out), left.offset() + right.offset());
}

std::size_t ErrorReport::undefinedCount() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        perIndexRelAbsError.begin(), perIndexRelAbsError.end(),
        [](const auto& e) { return !e.has_value(); }));
}

std::vector<double> ErrorReport::definedErrors() const {
    std::vector<double> out;
    out.reserve(perIndexRelAbsError.size());
    for (const auto& e : perIndexRelAbsError) {
        if (e) {
            out.push_back(*e);
        }
    }
    return out;
}

double ErrorReport::maxError() const {
    const auto errs = definedErrors();
    if (errs.empty()) {
        return 0.0;
    }
    return *std::max_element(errs.begin(), errs.end());
}

double ErrorReport::meanError() const {
    const auto errs = definedErrors();
    if (errs.empty()) {
        return 0.0;
    }
    return std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
}

double ErrorReport::medianError() const {
    auto errs = definedErrors();
    if (errs.empty()) {
        return 0.0;
    }
    const std::size_t mid = errs.size() / 2;
    std::nth_element(errs.begin(), errs.begin() + static_cast<std::ptrdiff_t>(mid), errs.end());
    if (errs.size() % 2 == 1) {
        return errs[mid];
    }
    const double upper = errs[mid];
    const double lower = *std::max_element(errs.begin(), errs.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

ErrorReport relativeAbsoluteError(const Pmf& numerical, const Pmf& exact) {
    if (numerical.size() != exact.size() || numerical.offset() != exact.offset()) {
        throw ShapeMismatch("relativeAbsoluteError: numerical and exact differ in length or offset");
    }
    const auto num = numerical.values();
    const auto ex = exact.values();
    const double peak = exact.max();
    const double scale = peak > 0.0 ? peak : 1.0;

    ErrorReport report;
    report.perIndexRelAbsError.reserve(ex.size());
    report.exactValues.reserve(ex.size());
    for (std::size_t i = 0; i < ex.size(); ++i) {
        report.exactValues.push_back(ex[i] / scale);
        if (ex[i] == 0.0) {
            report.perIndexRelAbsError.emplace_back(std::nullopt);
        } else {
            report.perIndexRelAbsError.emplace_back(std::abs((num[i] - ex[i]) / ex[i]));
        }
    }
    return report;
}

}  // namespace maxconv
