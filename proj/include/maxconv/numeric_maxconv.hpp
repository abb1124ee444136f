#pragma once

#include <stdexcept>
#include <vector>

#include "maxconv/pmf.hpp"

namespace maxconv {

class InvalidExponent : public std::domain_error {
public:
    InvalidExponent() : std::domain_error("invalid exponent") {}
};

// Norm exponent standing in for the infinity norm. p = 1 is ordinary
// convolution; larger p approaches max-convolution but underflows sooner.
class PStar {
public:
    explicit PStar(double value);

    double value() const noexcept { return value_; }

    friend auto operator<=>(const PStar&, const PStar&) = default;

private:
    double value_;
};

// Ladder of exponents tried per output index, highest first: an index takes
// the largest p whose max-normalized estimate is >= tau, else the smallest p.
class PiecewiseConfig {
public:
    PiecewiseConfig();
    PiecewiseConfig(std::vector<PStar> ladder, double tau);

    const std::vector<PStar>& ladder() const noexcept { return ladder_; }
    double tau() const noexcept { return tau_; }

private:
    std::vector<PStar> ladder_;
    double tau_;
};

// (sum_l L[l]^p R[m-l]^p)^(1/p) via one FFT convolution of the p-th powers.
Pmf pNormConvolve(const Pmf& left, const Pmf& right, PStar p);

// pNormConvolve with both inputs and the convolution output scaled to a peak
// of one before the fractional powers, then rescaled by max(L) * max(R).
Pmf maxConvolveNormalized(const Pmf& left, const Pmf& right, PStar p);

Pmf maxConvolvePiecewise(const Pmf& left, const Pmf& right,
                         const PiecewiseConfig& config = PiecewiseConfig());

// Exact naive max-convolution when chooseNaiveOrFast says so, otherwise the
// piecewise estimate.
Pmf maxConvolveAuto(const Pmf& left, const Pmf& right,
                    const PiecewiseConfig& config = PiecewiseConfig(),
                    double naiveCrossover = 1.0);

}  // namespace maxconv
