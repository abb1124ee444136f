// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "maxconv/conv_tree.hpp"
#include "maxconv/fast_conv.hpp"
#include "maxconv/harness.hpp"
#include "maxconv/numeric_maxconv.hpp"
#include "oracles.hpp"

using namespace maxconv;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass;
    std::string detail;
};

double secondsSince(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

// 1. FFT convolution against the quadratic oracle.
Verdict fftMatchesNaive() {
    const auto start = Clock::now();
    double worst = 0.0;
    std::uint64_t stream = 0;
    for (const std::size_t k : {3u, 17u, 64u, 257u, 1024u}) {
        for (int pair = 0; pair < 100; ++pair) {
            const auto [a, b] = generateUniformPair(k, deriveSeed(101, stream++));
            const Pmf fast = fastConvolve(a, b);
            const Pmf exact = naiveConvolve(a, b);
            double diff = 0.0;
            for (std::size_t i = 0; i < exact.size(); ++i) {
                diff = std::max(diff, std::abs(fast.values()[i] - exact.values()[i]));
            }
            worst = std::max(worst, diff / exact.max());
        }
    }
    const double elapsed = secondsSince(start);
    return {worst <= 1e-9 && elapsed < 5.0,
            fmt("max relative error %.3g (<= 1e-9), %.2f s (< 5 s)", worst, elapsed)};
}

// 2. p = 1 is ordinary convolution.
Verdict pOneIsConvolution() {
    double worst = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
        const auto [a, b] = generateUniformPair(100 + 37 * pair, deriveSeed(202, pair));
        const Pmf viaNorm = pNormConvolve(a, b, PStar(1));
        const Pmf direct = fastConvolve(a, b);
        for (std::size_t i = 0; i < direct.size(); ++i) {
            worst = std::max(worst, std::abs(viaNorm.values()[i] - direct.values()[i]));
        }
    }
    return {worst <= 1e-12, fmt("max elementwise difference %.3g (<= 1e-12)", worst)};
}

// 3. naive-max <= pNorm(64) <= pNorm(32) <= pNorm(4), elementwise.
Verdict normOrdering() {
    std::size_t violations = 0;
    std::size_t checked = 0;
    double worstExcess = 0.0;
    for (int pair = 0; pair < 50; ++pair) {
        const auto [a, b] = generateUniformPair(256, deriveSeed(303, pair));
        const Pmf exact = naiveMaxConvolve(a, b);
        const Pmf p64 = pNormConvolve(a, b, PStar(64));
        const Pmf p32 = pNormConvolve(a, b, PStar(32));
        const Pmf p4 = pNormConvolve(a, b, PStar(4));
        const double slack = 1e-9 * exact.max();
        for (std::size_t m = 0; m < exact.size(); ++m) {
            const double chain[] = {exact.values()[m], p64.values()[m], p32.values()[m], p4.values()[m]};
            for (int s = 0; s < 3; ++s) {
                ++checked;
                const double excess = chain[s] - chain[s + 1];
                if (excess > slack) {
                    ++violations;
                    worstExcess = std::max(worstExcess, excess);
                }
            }
        }
    }
    return {violations == 0,
            fmt("%.0f of %.0f ordered pairs violated; worst excess %.3g", static_cast<double>(violations),
                static_cast<double>(checked), worstExcess)};
}

// 4. numeric / exact <= t(m)^(1/64) + 1e-6 at p = 64.
Verdict termCountCeiling() {
    std::size_t violations = 0;
    std::size_t checked = 0;
    double worstRatioExcess = 0.0;
    for (const std::size_t k : {128u, 256u, 512u, 1024u}) {
        const auto t = oracle::pairCounts(k, k);
        for (int pair = 0; pair < 8; ++pair) {
            const auto [a, b] = generateUniformPair(k, deriveSeed(404 + k, pair));
            const Pmf exact = naiveMaxConvolve(a, b);
            const Pmf numeric = pNormConvolve(a, b, PStar(64));
            for (std::size_t m = 0; m < exact.size(); ++m) {
                ++checked;
                const double ceiling = std::pow(static_cast<double>(t[m]), 1.0 / 64.0) + 1e-6;
                const double ratio = numeric.values()[m] / exact.values()[m];
                if (!(ratio <= ceiling)) {
                    ++violations;
                    worstRatioExcess = std::max(worstRatioExcess, ratio - ceiling);
                }
            }
        }
    }
    return {violations == 0,
            fmt("%.0f of %.0f indices above the ceiling; worst excess %.3g", static_cast<double>(violations),
                static_cast<double>(checked), worstRatioExcess)};
}

// 5. Error-vs-p structure of the accuracy sweep.
Verdict accuracyStructure() {
    const std::vector<double> ps{2, 4, 8, 16, 32, 64};
    std::vector<PStar> pstars(ps.begin(), ps.end());
    std::map<double, std::pair<double, std::size_t>> high;
    std::map<double, std::pair<double, std::size_t>> low;
    runAccuracySweep({128, 256}, pstars, 16, 505, [&](const AccuracyRow& row) {
        if (row.exactValue >= 0.6) {
            high[row.p].first += row.relAbsError;
            ++high[row.p].second;
        }
        if (row.exactValue <= 0.01) {
            low[row.p].first += row.relAbsError;
            ++low[row.p].second;
        }
    });
    auto mean = [](const std::pair<double, std::size_t>& acc) {
        return acc.second == 0 ? std::nan("") : acc.first / static_cast<double>(acc.second);
    };
    bool monotone = true;
    std::ostringstream means;
    means << "high-value means:";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        means << ' ' << mean(high[ps[i]]);
        if (i > 0 && !(mean(high[ps[i]]) <= mean(high[ps[i - 1]]))) {
            monotone = false;
        }
    }
    const double low4 = mean(low[4.0]);
    const double low64 = mean(low[64.0]);
    means << "; low-value p=4 " << low4 << " vs p=64 " << low64;
    return {monotone && low4 < low64, means.str()};
}

// 6. Speed at k = 8192 and total bench time.
Verdict speedRatio() {
    const auto start = Clock::now();
    const auto records = runSpeedBench(defaultSpeedKs(), 5, 606);
    const double elapsed = secondsSince(start);
    std::vector<double> naive;
    std::vector<double> numeric;
    for (const auto& r : records) {
        if (r.k == 8192) {
            (r.method == BenchMethod::Naive ? naive : numeric).push_back(r.wallSeconds);
        }
    }
    const double ratio = median(numeric) / median(naive);
    return {ratio <= 0.1 && elapsed < 300.0,
            fmt("numeric/naive median at k=8192 = %.4f (<= 0.1); full bench %.1f s (< 300 s)", ratio, elapsed)};
}

const std::vector<std::pair<std::size_t, std::size_t>> kTreeGrid{{2, 2}, {2, 5}, {3, 4}, {4, 4}, {5, 3}};

// 7 and 8. Tree against exhaustive joint enumeration.
Verdict treeMatchesEnumeration(bool maxProduct) {
    std::mt19937_64 rng(maxProduct ? 808 : 707);
    const double tol = maxProduct ? 1e-12 : 1e-9;
    const ConvolutionOperator op = maxProduct ? ConvolutionOperator::naiveMax() : ConvolutionOperator::standard();
    const auto combine = maxProduct ? oracle::Combine::Max : oracle::Combine::Sum;
    double worst = 0.0;
    std::size_t argmaxMismatches = 0;
    for (const auto& [n, k] : kTreeGrid) {
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<Pmf> priors;
            for (std::size_t j = 0; j < n; ++j) {
                priors.push_back(oracle::randomPmf(rng, k));
            }
            const Pmf evidence = oracle::randomPmf(rng, n * (k - 1) + 1);
            const auto want = oracle::enumerateLikelihoods(priors, evidence, combine);
            const TreeResult got = convolutionTree(priors, evidence, op);
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t i = 0; i < k; ++i) {
                    worst = std::max(worst, std::abs(got.likelihoods[j].values()[i] - want[j][i]));
                }
                if (got.likelihoods[j].argmaxIndex() != oracle::argmax(want[j])) {
                    ++argmaxMismatches;
                }
            }
        }
    }
    const bool pass = worst <= tol && (!maxProduct || argmaxMismatches == 0);
    return {pass, fmt("max abs difference %.3g (<= %.0e); argmax mismatches %.0f", worst, tol,
                      static_cast<double>(argmaxMismatches))};
}

// 9. Desk-scale subset-sum statistics. The argmax that estimates mu_true is
// the max-marginal one (likelihood * own prior); likelihood-only numbers are
// printed alongside.
Verdict deskScaleDemo() {
    double agree = 0.0;
    double agreeLik = 0.0;
    double near = 0.0;
    double nearLik = 0.0;
    const int seeds = 10;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        const auto report = runSubsetSumDemo(8, 64, seed, {DemoMode::NaiveMax, DemoMode::NumericMax});
        const auto* numeric = report.find(DemoMode::NumericMax);
        agree += *report.numericNaiveArgmaxAgreement(true);
        agreeLik += *report.numericNaiveArgmaxAgreement(false);
        near += numeric->fractionNearTruth(report.instance.trueMeans, 3.0, true);
        nearLik += numeric->fractionNearTruth(report.instance.trueMeans, 3.0, false);
    }
    agree /= seeds;
    agreeLik /= seeds;
    near /= seeds;
    nearLik /= seeds;
    return {agree >= 0.9 && near >= 0.6,
            fmt("argmax agreement %.3f (>= 0.9); within 3 bins of true mean %.3f (>= 0.6)", agree, near) +
                fmt("; likelihood-only argmax: agreement %.3f, within 3 bins %.3f", agreeLik, nearLik)};
}

// 10. Subset-sum timing at n = 32, k = 256.
Verdict fullScaleDemo() {
    const auto start = Clock::now();
    const auto report = runSubsetSumDemo(32, 256, 1010, {DemoMode::NaiveMax, DemoMode::NumericMax});
    const double elapsed = secondsSince(start);
    const double naive = report.find(DemoMode::NaiveMax)->wallSeconds;
    const double numeric = report.find(DemoMode::NumericMax)->wallSeconds;
    const double ratio = numeric / naive;
    return {ratio <= 1.0 / 20.0 && elapsed <= 600.0,
            fmt("numeric %.4f s / naive %.4f s = %.4f (<= 0.05)", numeric, naive, ratio) +
                fmt("; total %.1f s (<= 600 s)", elapsed)};
}

// 11. Cost-formula speedup anchor.
Verdict costAnchor() {
    const double naiveCost = 256.0 * 256.0 * 1024.0 * 1024.0;
    const double ratio = naiveCost / treeCostEstimate(256, 1024);
    return {ratio >= 1800.0, fmt("n^2 k^2 / treeCostEstimate(256, 1024) = %.1f (>= 1800)", ratio)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 FFT convolution matches naive oracle", fftMatchesNaive},
        {"2 p=1 reduces to standard convolution", pOneIsConvolution},
        {"3 max <= p64 <= p32 <= p4 ordering", normOrdering},
        {"4 term-count ceiling at p=64", termCountCeiling},
        {"5 accuracy-vs-p structure", accuracyStructure},
        {"6 speed ratio at k=8192", speedRatio},
        {"7 sum-product tree vs enumeration", [] { return treeMatchesEnumeration(false); }},
        {"8 max-product tree vs enumeration", [] { return treeMatchesEnumeration(true); }},
        {"9 subset-sum desk scale statistics", deskScaleDemo},
        {"10 subset-sum n=32 k=256 speedup", fullScaleDemo},
        {"11 tree cost formula speedup anchor", costAnchor},
    };

    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict result{false, ""};
        try {
            result = check();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s [%s] %s\n", result.pass ? "PASS" : "FAIL", name.c_str(), result.detail.c_str());
        std::fflush(stdout);
        failures += result.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
