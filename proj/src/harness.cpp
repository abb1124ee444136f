#include "maxconv/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "maxconv/pmf_io.hpp"

namespace maxconv {

double Rng::uniform01() {
    // 53 random mantissa bits, shifted half a step off zero: strictly inside (0, 1).
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::pair<Pmf, Pmf> generateUniformPair(std::size_t k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> left(k);
    std::vector<double> right(k);
    for (double& v : left) {
        v = rng.uniform01();
    }
    for (double& v : right) {
        v = rng.uniform01();
    }
    return {Pmf(std::move(left)), Pmf(std::move(right))};
}

std::vector<double> discretizedGaussian(std::size_t length, double mean, double sigma) {
    std::vector<double> out(length);
    double total = 0.0;
    for (std::size_t i = 0; i < length; ++i) {
        const double z = (static_cast<double>(i) - mean) / sigma;
        out[i] = std::exp(-0.5 * z * z);
        total += out[i];
    }
    if (total > 0.0) {
        for (double& v : out) {
            v /= total;
        }
    }
    return out;
}

SubsetSumInstance generateSubsetSumInstance(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (n < 2 || k < 4) {
        throw std::invalid_argument("subset-sum instance needs n >= 2 and k >= 4");
    }
    Rng rng(seed);
    const double top = static_cast<double>(k - 1);
    const double maxSigma = static_cast<double>(k) / 10.0;

    SubsetSumInstance inst;
    inst.n = n;
    inst.k = k;
    inst.seed = seed;
    inst.priors.reserve(n);
    inst.trueMeans.reserve(n);

    for (std::size_t j = 0; j < n; ++j) {
        const double muTrue = rng.uniform(0.0, top);
        const double muFalse = rng.uniform(0.0, top);
        const double sigmaTrue = std::max(kMinGaussianSigma, rng.uniform(0.0, maxSigma));
        const double sigmaFalse = std::max(kMinGaussianSigma, rng.uniform(0.0, maxSigma));

        const auto bought = discretizedGaussian(k, muTrue, sigmaTrue);
        const auto skipped = discretizedGaussian(k, muFalse, sigmaFalse);
        std::vector<double> prior(k);
        for (std::size_t i = 0; i < k; ++i) {
            prior[i] = bought[i] + skipped[i] + rng.uniform(0.0, kBinNoise);
        }
        inst.priors.push_back(normalizeSum(Pmf(std::move(prior))));
        inst.trueMeans.push_back(muTrue);
    }

    const std::size_t sumLength = n * (k - 1) + 1;
    double totalMean = 0.0;
    for (double mu : inst.trueMeans) {
        totalMean += mu;
    }
    const double variance = 0.005 * static_cast<double>(n * k - (n - 1));
    auto likelihood = discretizedGaussian(sumLength, totalMean, std::sqrt(variance));
    for (double& v : likelihood) {
        v += rng.uniform(0.0, kBinNoise);
    }
    inst.sumLikelihood = normalizeSum(Pmf(std::move(likelihood)));
    return inst;
}

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double timeSeconds(F&& f) {
    const auto start = Clock::now();
    f();
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    // Guard against a zero reading from a coarse clock.
    return std::max(elapsed.count(), 1e-9);
}

std::string formatNumber(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view toString(BenchMethod method) noexcept {
    return method == BenchMethod::Naive ? "naive" : "numeric";
}

const std::vector<std::size_t>& defaultSpeedKs() {
    static const std::vector<std::size_t> ks{32, 64, 128, 256, 512, 1024, 2048, 4096, 8192};
    return ks;
}

std::vector<BenchRecord> runSpeedBench(const std::vector<std::size_t>& ks, std::size_t replicates,
                                       std::uint64_t seed, const PiecewiseConfig& config) {
    if (replicates < 1) {
        throw std::invalid_argument("replicates must be >= 1");
    }
    std::vector<BenchRecord> records;
    records.reserve(ks.size() * replicates * 2);
    for (const std::size_t k : ks) {
        for (std::size_t r = 0; r < replicates; ++r) {
            const auto [left, right] = generateUniformPair(k, deriveSeed(deriveSeed(seed, k), r));
            double sink = 0.0;
            const double naive = timeSeconds([&] { sink += naiveMaxConvolve(left, right).max(); });
            const double numeric =
                timeSeconds([&] { sink += maxConvolvePiecewise(left, right, config).max(); });
            // Keeps both results observable so neither call can be elided.
            if (!std::isfinite(sink)) {
                throw std::logic_error("non-finite benchmark result");
            }
            records.push_back({k, BenchMethod::Naive, naive, r});
            records.push_back({k, BenchMethod::Numeric, numeric, r});
        }
    }
    return records;
}

void writeSpeedCsv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << "k,method,replicate,wall_seconds\n";
    for (const auto& rec : records) {
        out << rec.k << ',' << toString(rec.method) << ',' << rec.replicate << ','
            << formatNumber(rec.wallSeconds) << '\n';
    }
}

const std::vector<std::size_t>& defaultAccuracyKs() {
    static const std::vector<std::size_t> ks{128, 256, 512, 1024};
    return ks;
}

const std::vector<double>& defaultAccuracyPs() {
    static const std::vector<double> ps{2, 4, 8, 16, 32, 64};
    return ps;
}

void runAccuracySweep(const std::vector<std::size_t>& ks, const std::vector<PStar>& ps,
                      std::size_t replicates, std::uint64_t seed,
                      const std::function<void(const AccuracyRow&)>& sink) {
    if (replicates < 1) {
        throw std::invalid_argument("replicates must be >= 1");
    }
    for (const std::size_t k : ks) {
        for (const PStar p : ps) {
            for (std::size_t r = 0; r < replicates; ++r) {
                const auto [left, right] = generateUniformPair(k, deriveSeed(deriveSeed(seed, k), r));
                const Pmf exact = naiveMaxConvolve(left, right);
                const Pmf numeric = maxConvolveNormalized(left, right, p);
                const ErrorReport report = relativeAbsoluteError(numeric, exact);
                for (std::size_t i = 0; i < report.exactValues.size(); ++i) {
                    if (const auto& err = report.perIndexRelAbsError[i]) {
                        sink(AccuracyRow{k, p.value(), i, report.exactValues[i], *err});
                    }
                }
            }
        }
    }
}

void writeAccuracyCsvHeader(std::ostream& out) {
    out << "k,p,index,exact_value,rel_abs_error\n";
}

void writeAccuracyCsvRow(std::ostream& out, const AccuracyRow& row) {
    out << row.k << ',' << formatNumber(row.p) << ',' << row.index << ','
        << formatNumber(row.exactValue) << ',' << formatNumber(row.relAbsError) << '\n';
}

std::string_view toString(DemoMode mode) noexcept {
    switch (mode) {
        case DemoMode::NaiveMax:
            return "naive-max";
        case DemoMode::NumericMax:
            return "numeric-max";
        case DemoMode::SumProduct:
            return "sum-product";
    }
    return "unknown";
}

DemoMode parseDemoMode(std::string_view name) {
    for (const DemoMode mode : {DemoMode::NaiveMax, DemoMode::NumericMax, DemoMode::SumProduct}) {
        if (toString(mode) == name) {
            return mode;
        }
    }
    throw std::invalid_argument("unknown demo mode: " + std::string(name));
}

ConvolutionOperator operatorFor(DemoMode mode) {
    switch (mode) {
        case DemoMode::NaiveMax:
            return ConvolutionOperator::naiveMax();
        case DemoMode::NumericMax:
            return ConvolutionOperator::numericMax();
        case DemoMode::SumProduct:
            return ConvolutionOperator::standard();
    }
    throw std::invalid_argument("unknown demo mode");
}

double DemoModeResult::fractionNearTruth(const std::vector<double>& trueMeans, double bins,
                                         bool posterior) const {
    const auto& argmax = posterior ? posteriorArgmax : likelihoodArgmax;
    if (argmax.empty()) {
        return 0.0;
    }
    std::size_t near = 0;
    for (std::size_t j = 0; j < argmax.size(); ++j) {
        if (std::abs(static_cast<double>(argmax[j]) - trueMeans[j]) <= bins) {
            ++near;
        }
    }
    return static_cast<double>(near) / static_cast<double>(argmax.size());
}

const DemoModeResult* SubsetSumReport::find(DemoMode mode) const noexcept {
    const auto it = std::find_if(modes.begin(), modes.end(),
                                 [mode](const DemoModeResult& r) { return r.mode == mode; });
    return it == modes.end() ? nullptr : &*it;
}

std::optional<double> SubsetSumReport::numericNaiveArgmaxAgreement(bool posterior) const {
    const DemoModeResult* naive = find(DemoMode::NaiveMax);
    const DemoModeResult* numeric = find(DemoMode::NumericMax);
    if (naive == nullptr || numeric == nullptr || naive->likelihoodArgmax.empty()) {
        return std::nullopt;
    }
    const auto& a = posterior ? naive->posteriorArgmax : naive->likelihoodArgmax;
    const auto& b = posterior ? numeric->posteriorArgmax : numeric->likelihoodArgmax;
    std::size_t agree = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == b[j]) {
            ++agree;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(a.size());
}

SubsetSumReport runSubsetSumDemo(std::size_t n, std::size_t k, std::uint64_t seed,
                                 const std::vector<DemoMode>& modes) {
    SubsetSumReport report;
    report.instance = generateSubsetSumInstance(n, k, seed);
    const auto& inst = report.instance;

    for (const DemoMode mode : modes) {
        const ConvolutionOperator op = operatorFor(mode);
        DemoModeResult result;
        result.mode = mode;
        result.wallSeconds = timeSeconds(
            [&] { result.tree = convolutionTree(inst.priors, inst.sumLikelihood, op); });

        for (std::size_t j = 0; j < inst.priors.size(); ++j) {
            const Pmf& lik = result.tree.likelihoods[j];
            result.likelihoodArgmax.push_back(lik.argmaxOutcome());

            std::vector<double> post(lik.size());
            for (std::size_t i = 0; i < post.size(); ++i) {
                post[i] = lik.values()[i] * inst.priors[j].values()[i];
            }
            result.posteriorArgmax.push_back(Pmf(std::move(post), lik.offset()).argmaxOutcome());
        }
        report.modes.push_back(std::move(result));
    }
    return report;
}

void writeSubsetSumReport(const std::filesystem::path& dir, const SubsetSumReport& report) {
    using nlohmann::json;
    std::filesystem::create_directories(dir);
    const auto& inst = report.instance;

    json instance{{"n", inst.n},
                  {"k", inst.k},
                  {"seed", inst.seed},
                  {"true_means", inst.trueMeans},
                  {"sum_likelihood", toJson(inst.sumLikelihood)}};
    json priors = json::array();
    for (const Pmf& p : inst.priors) {
        priors.push_back(toJson(p));
    }
    instance["priors"] = std::move(priors);
    std::ofstream(dir / "instance.json") << instance.dump() << '\n';

    json modes = json::array();
    for (const DemoModeResult& r : report.modes) {
        writePmfLines(dir / ("likelihoods_" + std::string(toString(r.mode)) + ".ndjson"),
                      r.tree.likelihoods);
        std::vector<double> distance;
        for (std::size_t j = 0; j < r.likelihoodArgmax.size(); ++j) {
            distance.push_back(std::abs(static_cast<double>(r.likelihoodArgmax[j]) - inst.trueMeans[j]));
        }
        modes.push_back(json{{"mode", toString(r.mode)},
                             {"wall_seconds", r.wallSeconds},
                             {"likelihood_argmax", r.likelihoodArgmax},
                             {"posterior_argmax", r.posteriorArgmax},
                             {"abs_argmax_minus_true_mean", distance},
                             {"fraction_within_3_bins", r.fractionNearTruth(inst.trueMeans, 3.0)},
                             {"posterior_fraction_within_3_bins",
                              r.fractionNearTruth(inst.trueMeans, 3.0, true)},
                             {"sum_prior", toJson(r.tree.sumPrior)}});
    }
    json summary{{"n", inst.n}, {"k", inst.k}, {"seed", inst.seed}, {"modes", std::move(modes)}};
    if (const auto agreement = report.numericNaiveArgmaxAgreement()) {
        summary["numeric_naive_argmax_agreement"] = *agreement;
        summary["numeric_naive_posterior_argmax_agreement"] = *report.numericNaiveArgmaxAgreement(true);
        summary["numeric_over_naive_wall_ratio"] =
            report.find(DemoMode::NumericMax)->wallSeconds / report.find(DemoMode::NaiveMax)->wallSeconds;
    }
    std::ofstream(dir / "report.json") << summary.dump(2) << '\n';
}

}  // namespace maxconv
