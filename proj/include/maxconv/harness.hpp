#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maxconv/conv_tree.hpp"
#include "maxconv/numeric_maxconv.hpp"
#include "maxconv/pmf.hpp"

namespace maxconv {

// Reproducible random source. The engine is mt19937_64, whose output sequence
// is fixed by the C++ standard; doubles are built from the top 53 bits rather
// than through std::uniform_real_distribution, whose algorithm is
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on the open interval (0, 1).
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

// Independent seed for stream `stream` of a run seeded with `seed` (splitmix64).
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) noexcept;

std::pair<Pmf, Pmf> generateUniformPair(std::size_t k, std::uint64_t seed);

// Density of N(mean, sigma^2) at bins 0..length-1, normalized to sum to one.
std::vector<double> discretizedGaussian(std::size_t length, double mean, double sigma);

struct SubsetSumInstance {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<Pmf> priors;
    Pmf sumLikelihood = Pmf::delta(0);
    std::vector<double> trueMeans;
    std::uint64_t seed = 0;
};

inline constexpr double kMinGaussianSigma = 0.5;
inline constexpr double kBinNoise = 1e-4;

SubsetSumInstance generateSubsetSumInstance(std::size_t n, std::size_t k, std::uint64_t seed);

enum class BenchMethod { Naive, Numeric };
std::string_view toString(BenchMethod method) noexcept;

struct BenchRecord {
    std::size_t k = 0;
    BenchMethod method = BenchMethod::Naive;
    double wallSeconds = 0.0;
    std::size_t replicate = 0;
};

const std::vector<std::size_t>& defaultSpeedKs();

// Times naiveMaxConvolve and maxConvolvePiecewise on the same uniform pair,
// serially, for every k and replicate.
std::vector<BenchRecord> runSpeedBench(const std::vector<std::size_t>& ks, std::size_t replicates,
                                       std::uint64_t seed,
                                       const PiecewiseConfig& config = PiecewiseConfig());

void writeSpeedCsv(std::ostream& out, const std::vector<BenchRecord>& records);

struct AccuracyRow {
    std::size_t k = 0;
    double p = 0.0;
    std::size_t index = 0;
    double exactValue = 0.0;  // max-normalized naive result
    double relAbsError = 0.0;
};

const std::vector<std::size_t>& defaultAccuracyKs();
const std::vector<double>& defaultAccuracyPs();

// For every (k, p, replicate), compares maxConvolveNormalized against the
// naive result and hands one row per output index to `sink`. Indices where
// the exact value is zero have no defined error and are not emitted.
void runAccuracySweep(const std::vector<std::size_t>& ks, const std::vector<PStar>& ps,
                      std::size_t replicates, std::uint64_t seed,
                      const std::function<void(const AccuracyRow&)>& sink);

void writeAccuracyCsvHeader(std::ostream& out);
void writeAccuracyCsvRow(std::ostream& out, const AccuracyRow& row);

enum class DemoMode { NaiveMax, NumericMax, SumProduct };
std::string_view toString(DemoMode mode) noexcept;
DemoMode parseDemoMode(std::string_view name);
ConvolutionOperator operatorFor(DemoMode mode);

struct DemoModeResult {
    DemoMode mode = DemoMode::NaiveMax;
    TreeResult tree;
    double wallSeconds = 0.0;
    // Argmax of each likelihood curve, and of likelihood times prior.
    std::vector<Outcome> likelihoodArgmax;
    std::vector<Outcome> posteriorArgmax;

    // Fraction of variables whose argmax is within `bins` of the true mean.
    double fractionNearTruth(const std::vector<double>& trueMeans, double bins,
                             bool posterior = false) const;
};

struct SubsetSumReport {
    SubsetSumInstance instance;
    std::vector<DemoModeResult> modes;

    const DemoModeResult* find(DemoMode mode) const noexcept;
    // Share of variables whose numeric-max argmax equals the naive-max one;
    // empty unless both modes ran. posterior compares likelihood * prior.
    std::optional<double> numericNaiveArgmaxAgreement(bool posterior = false) const;
};

// Runs the tree once per mode on the same instance; only the tree itself is
// timed.
SubsetSumReport runSubsetSumDemo(std::size_t n, std::size_t k, std::uint64_t seed,
                                 const std::vector<DemoMode>& modes);

// instance.json, likelihoods_<mode>.ndjson and report.json under `dir`.
void writeSubsetSumReport(const std::filesystem::path& dir, const SubsetSumReport& report);

}  // namespace maxconv
