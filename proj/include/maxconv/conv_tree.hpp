#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maxconv/numeric_maxconv.hpp"
#include "maxconv/pmf.hpp"

namespace maxconv {

// The evidence on the sum cannot be reached by any combination of outcomes.
class InconsistentEvidence : public std::runtime_error {
public:
    InconsistentEvidence() : std::runtime_error("inconsistent evidence") {}
};

enum class Normalization { BySum, ByMax };

Pmf normalizeBy(const Pmf& p, Normalization mode);

// Pairwise "addition" of random variables used at every tree node.
// apply must return kL + kR - 1 values with summed offsets and be commutative.
struct ConvolutionOperator {
    std::string name;
    std::function<Pmf(const Pmf&, const Pmf&)> apply;
    Normalization normalization = Normalization::BySum;

    // Sum-product: FFT convolution, naive below the size crossover.
    static ConvolutionOperator standard();
    // Max-product with the exact quadratic max-convolution.
    static ConvolutionOperator naiveMax();
    // Max-product with the numeric estimate (naive below the size crossover).
    static ConvolutionOperator numericMax(PiecewiseConfig config = PiecewiseConfig());
    // Max-product with a single un-normalized p-norm convolution.
    static ConvolutionOperator pNorm(PStar p);

    // Accepts "sum", "max-naive", "max-numeric" and "pnorm:<p>".
    static ConvolutionOperator parse(std::string_view spec);
};

struct TreeResult {
    // One per input prior, on that prior's outcome range.
    std::vector<Pmf> likelihoods;
    // Distribution of the sum of all inputs.
    Pmf sumPrior = Pmf::delta(0);
};

// Slice of `wide` over target's outcome range, zero where wide has no entry,
// normalized per `mode`. Throws InconsistentEvidence when nothing survives.
Pmf narrowToSupport(const Pmf& wide, const Pmf& target, Normalization mode);

// Likelihood of every input variable given evidence on the sum of all of
// them. Inputs are padded with point masses at zero up to a power of two.
TreeResult convolutionTree(std::span<const Pmf> priors, const Pmf& sumLikelihood,
                           const ConvolutionOperator& op);

// Operation count of the tree with k log k pairwise convolutions; n is
// rounded up to a power of two.
double treeCostEstimate(std::size_t n, std::size_t k);

}  // namespace maxconv
