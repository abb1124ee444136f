#include "maxconv/conv_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "maxconv/fast_conv.hpp"

namespace maxconv {

Pmf normalizeBy(const Pmf& p, Normalization mode) {
    return mode == Normalization::BySum ? normalizeSum(p) : normalizeMax(p);
}

ConvolutionOperator ConvolutionOperator::standard() {
    return {"sum",
            [](const Pmf& a, const Pmf& b) {
                return chooseNaiveOrFast(a.size(), b.size()) == ConvMethod::Naive
                           ? naiveConvolve(a, b)
                           : fastConvolve(a, b);
            },
            Normalization::BySum};
}

ConvolutionOperator ConvolutionOperator::naiveMax() {
    return {"max-naive", naiveMaxConvolve, Normalization::ByMax};
}

ConvolutionOperator ConvolutionOperator::numericMax(PiecewiseConfig config) {
    return {"max-numeric",
            [config = std::move(config)](const Pmf& a, const Pmf& b) {
                return maxConvolveAuto(a, b, config);
            },
            Normalization::ByMax};
}

ConvolutionOperator ConvolutionOperator::pNorm(PStar p) {
    std::string name = "pnorm:";
    // Shortest round-trip form, e.g. "pnorm:64".
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, p.value());
    name.append(buf, res.ptr);
    return {std::move(name),
            [p](const Pmf& a, const Pmf& b) { return pNormConvolve(a, b, p); },
            Normalization::ByMax};
}

ConvolutionOperator ConvolutionOperator::parse(std::string_view spec) {
    if (spec == "sum") {
        return standard();
    }
    if (spec == "max-naive") {
        return naiveMax();
    }
    if (spec == "max-numeric") {
        return numericMax();
    }
    constexpr std::string_view prefix = "pnorm:";
    if (spec.starts_with(prefix)) {
        const std::string_view digits = spec.substr(prefix.size());
        double p = 0.0;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) {
            throw std::invalid_argument("bad p-norm exponent in operator: " + std::string(spec));
        }
        return pNorm(PStar(p));
    }
    throw std::invalid_argument("unknown convolution operator: " + std::string(spec));
}

Pmf narrowToSupport(const Pmf& wide, const Pmf& target, Normalization mode) {
    const Outcome lo = std::max(wide.firstOutcome(), target.firstOutcome());
    const Outcome hi = std::min(wide.lastOutcome(), target.lastOutcome());
    if (lo > hi) {
        throw InconsistentEvidence();
    }
    std::vector<double> out(target.size(), 0.0);
    for (Outcome x = lo; x <= hi; ++x) {
        out[static_cast<std::size_t>(x - target.offset())] = wide.at(x);
    }
    Pmf narrowed(std::move(out), target.offset());
    if (narrowed.allZero()) {
        throw InconsistentEvidence();
    }
    return normalizeBy(narrowed, mode);
}

namespace {

Pmf normalizedOrInconsistent(const Pmf& p, Normalization mode) {
    if (p.allZero()) {
        throw InconsistentEvidence();
    }
    return normalizeBy(p, mode);
}

}  // namespace

TreeResult convolutionTree(std::span<const Pmf> priors, const Pmf& sumLikelihood,
                           const ConvolutionOperator& op) {
    if (priors.empty()) {
        throw std::invalid_argument("convolutionTree needs at least one prior");
    }
    for (const Pmf& prior : priors) {
        if (prior.allZero()) {
            throw DegenerateDistribution();
        }
    }
    const Normalization mode = op.normalization;

    // forward[0] holds the (padded) leaves, forward.back() the single root.
    std::vector<std::vector<Pmf>> forward;
    forward.emplace_back(priors.begin(), priors.end());
    forward[0].resize(nextPowerOfTwo(priors.size()), Pmf::delta(0));

    while (forward.back().size() > 1) {
        const auto& layer = forward.back();
        std::vector<Pmf> parents;
        parents.reserve(layer.size() / 2);
        for (std::size_t j = 0; j + 1 < layer.size(); j += 2) {
            parents.push_back(normalizeBy(op.apply(layer[j], layer[j + 1]), mode));
        }
        forward.push_back(std::move(parents));
    }

    // Sums outside the root's range are unreachable; trimming the evidence to
    // that range leaves every child message unchanged.
    std::vector<Pmf> messages{narrowToSupport(sumLikelihood, forward.back()[0], mode)};

    for (std::size_t level = forward.size() - 1; level-- > 0;) {
        const auto& children = forward[level];
        std::vector<Pmf> next;
        next.reserve(children.size());
        for (std::size_t j = 0; j < messages.size(); ++j) {
            const Pmf& lhs = children[2 * j];
            const Pmf& rhs = children[2 * j + 1];
            const Pmf towardLhs = normalizedOrInconsistent(op.apply(messages[j], negate(rhs)), mode);
            const Pmf towardRhs = normalizedOrInconsistent(op.apply(messages[j], negate(lhs)), mode);
            next.push_back(narrowToSupport(towardLhs, lhs, mode));
            next.push_back(narrowToSupport(towardRhs, rhs, mode));
        }
        messages = std::move(next);
    }

    messages.resize(priors.size(), Pmf::delta(0));
    return TreeResult{std::move(messages), normalizeBy(forward.back()[0], mode)};
}

double treeCostEstimate(std::size_t n, std::size_t k) {
    const std::size_t leaves = nextPowerOfTwo(n);
    const auto depth = static_cast<int>(std::lround(std::log2(static_cast<double>(leaves))));
    double cost = 0.0;
    for (int u = 1; u <= depth; ++u) {
        const double width = static_cast<double>(k) * std::ldexp(1.0, u);
        const double pairings = static_cast<double>(leaves) / std::ldexp(1.0, u);
        cost += pairings * width * std::log2(width);
    }
    return cost;
}

}  // namespace maxconv
