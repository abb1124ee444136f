#include "maxconv/numeric_maxconv.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <span>

#include "maxconv/fast_conv.hpp"

namespace maxconv {

PStar::PStar(double value) : value_(value) {
    if (!(value >= 1.0) || !std::isfinite(value)) {
        throw InvalidExponent();
    }
}

PiecewiseConfig::PiecewiseConfig()
    : PiecewiseConfig({PStar(4.0), PStar(32.0), PStar(64.0)}, 0.6) {}

PiecewiseConfig::PiecewiseConfig(std::vector<PStar> ladder, double tau)
    : ladder_(std::move(ladder)), tau_(tau) {
    if (ladder_.size() < 2) {
        throw std::invalid_argument("p ladder needs at least two exponents");
    }
    if (std::adjacent_find(ladder_.begin(), ladder_.end(),
                           [](PStar a, PStar b) { return !(a < b); }) != ladder_.end()) {
        throw std::invalid_argument("p ladder must be strictly ascending");
    }
    if (!(tau_ > 0.0 && tau_ <= 1.0)) {
        throw std::invalid_argument("tau must lie in (0, 1]");
    }
}

namespace {

// Number of squarings that turn x into x^p when p is 2^s, or -1.
int powerOfTwoExponent(double p) {
    int exp = 0;
    const double mantissa = std::frexp(p, &exp);
    return mantissa == 0.5 && exp >= 1 ? exp - 1 : -1;
}

// x^p for every element into out. Results in the subnormal range are flushed
// to zero: they carry no usable precision through an FFT and slow it down.
void raiseInto(std::span<const double> xs, double scale, double p, std::vector<double>& out) {
    out.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = xs[i] / scale;
    }
    const int squarings = powerOfTwoExponent(p);
    if (squarings >= 0) {
        for (int s = 0; s < squarings; ++s) {
            for (double& v : out) {
                v *= v;
            }
        }
    } else {
        for (double& v : out) {
            v = std::pow(v, p);
        }
    }
    for (double& v : out) {
        v = v < DBL_MIN ? 0.0 : v;
    }
}

// v^(1/p); squarings is powerOfTwoExponent(p), hoisted out of hot loops.
double root(double v, double p, int squarings) {
    if (squarings >= 0) {
        for (int s = 0; s < squarings; ++s) {
            v = std::sqrt(v);
        }
        return v;
    }
    return std::pow(v, 1.0 / p);
}

void rootInPlace(std::vector<double>& xs, double p) {
    const int squarings = powerOfTwoExponent(p);
    if (squarings >= 0) {
        for (int s = 0; s < squarings; ++s) {
            for (double& v : xs) {
                v = std::sqrt(v);
            }
        }
    } else {
        const double inv = 1.0 / p;
        for (double& v : xs) {
            v = std::pow(v, inv);
        }
    }
}

// Convolution of (left / leftScale)^p with (right / rightScale)^p, before the
// root, written to conv. With normalizeOutput it is divided by its maximum so
// it peaks at one.
void poweredConvolution(const Pmf& left, double leftScale, const Pmf& right, double rightScale,
                        double p, bool normalizeOutput, std::vector<double>& conv) {
    thread_local std::vector<double> powL;
    thread_local std::vector<double> powR;
    raiseInto(left.values(), leftScale, p, powL);
    raiseInto(right.values(), rightScale, p, powR);
    conv.resize(left.size() + right.size() - 1);
    convolveInto(powL, powR, conv);

    if (normalizeOutput) {
        const double divisor = *std::max_element(conv.begin(), conv.end());
        if (!(divisor > 0.0)) {
            throw DegenerateDistribution();
        }
        const double inv = 1.0 / divisor;
        for (double& v : conv) {
            v *= inv;
        }
    }
}

std::vector<double> pNormCore(const Pmf& left, double leftScale, const Pmf& right,
                              double rightScale, double p, bool normalizeOutput) {
    std::vector<double> conv;
    poweredConvolution(left, leftScale, right, rightScale, p, normalizeOutput, conv);
    rootInPlace(conv, p);
    return conv;
}

struct Peaks {
    double left;
    double right;
};

Peaks requirePositive(const Pmf& left, const Pmf& right) {
    const Peaks peaks{left.max(), right.max()};
    if (!(peaks.left > 0.0) || !(peaks.right > 0.0)) {
        throw DegenerateDistribution();
    }
    return peaks;
}

}  // namespace

Pmf pNormConvolve(const Pmf& left, const Pmf& right, PStar p) {
    return Pmf(pNormCore(left, 1.0, right, 1.0, p.value(), false),
               left.offset() + right.offset());
}

Pmf maxConvolveNormalized(const Pmf& left, const Pmf& right, PStar p) {
    const Peaks peaks = requirePositive(left, right);
    std::vector<double> out = pNormCore(left, peaks.left, right, peaks.right, p.value(), true);
    const double rescale = peaks.left * peaks.right;
    for (double& v : out) {
        v *= rescale;
    }
    return Pmf(std::move(out), left.offset() + right.offset());
}

Pmf maxConvolvePiecewise(const Pmf& left, const Pmf& right, const PiecewiseConfig& config) {
    const Peaks peaks = requirePositive(left, right);
    const auto& ladder = config.ladder();
    const double tau = config.tau();

    // Rungs stay max-normalized and un-rooted; the root is taken only for
    // the value an index ends up using. The powered test against tau^p is a
    // prefilter with slack, the decision itself is made on the root.
    thread_local std::vector<std::vector<double>> rungs;
    rungs.resize(ladder.size());
    std::vector<double> cutoffs(ladder.size());
    std::vector<int> squarings(ladder.size());
    for (std::size_t r = 0; r < ladder.size(); ++r) {
        const double p = ladder[r].value();
        poweredConvolution(left, peaks.left, right, peaks.right, p, true, rungs[r]);
        cutoffs[r] = std::pow(tau, p) * (1.0 - 1e-9);
        squarings[r] = powerOfTwoExponent(p);
    }

    const std::size_t len = rungs.front().size();
    const double rescale = peaks.left * peaks.right;
    std::vector<double> out(len);
    for (std::size_t m = 0; m < len; ++m) {
        double chosen = -1.0;
        for (std::size_t r = rungs.size(); r-- > 1;) {
            if (rungs[r][m] >= cutoffs[r]) {
                const double v = root(rungs[r][m], ladder[r].value(), squarings[r]);
                if (v >= tau) {
                    chosen = v;
                    break;
                }
            }
        }
        if (chosen < 0.0) {
            chosen = root(rungs.front()[m], ladder.front().value(), squarings.front());
        }
        out[m] = chosen * rescale;
    }
    return Pmf(std::move(out), left.offset() + right.offset());
}

Pmf maxConvolveAuto(const Pmf& left, const Pmf& right, const PiecewiseConfig& config,
                    double naiveCrossover) {
    requirePositive(left, right);
    if (chooseNaiveOrFast(left.size(), right.size(), naiveCrossover) == ConvMethod::Naive) {
        return naiveMaxConvolve(left, right);
    }
    return maxConvolvePiecewise(left, right, config);
}

}  // namespace maxconv
