// Command-line front end: single max-convolutions, convolution trees, and the
// speed / accuracy / subset-sum experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "maxconv/conv_tree.hpp"
#include "maxconv/harness.hpp"
#include "maxconv/numeric_maxconv.hpp"
#include "maxconv/pmf_io.hpp"

using namespace maxconv;

namespace {

PiecewiseConfig makeConfig(const std::vector<double>& ladder, double tau) {
    std::vector<PStar> ps;
    ps.reserve(ladder.size());
    for (double p : ladder) {
        ps.emplace_back(p);
    }
    return PiecewiseConfig(std::move(ps), tau);
}

std::ofstream openOutput(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    return out;
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast numerical max-convolution and probabilistic convolution trees"};
    app.require_subcommand(1);

    // maxconv
    auto* maxconvCmd = app.add_subcommand("maxconv", "Max-convolve two PMF JSON files");
    std::string leftPath;
    std::string rightPath;
    std::string method = "auto";
    std::vector<double> ladder{4, 32, 64};
    double tau = 0.6;
    std::string maxconvOut;
    maxconvCmd->add_option("--left", leftPath, "Left PMF (JSON)")->required()->check(CLI::ExistingFile);
    maxconvCmd->add_option("--right", rightPath, "Right PMF (JSON)")->required()->check(CLI::ExistingFile);
    maxconvCmd->add_option("--method", method, "naive, numeric or auto")
        ->check(CLI::IsMember({"naive", "numeric", "auto"}))
        ->capture_default_str();
    maxconvCmd->add_option("--p-ladder", ladder, "Ascending p* values")->delimiter(',')->capture_default_str();
    maxconvCmd->add_option("--tau", tau, "Threshold for keeping a higher p*")->capture_default_str();
    maxconvCmd->add_option("--out", maxconvOut, "Output PMF (JSON)")->required();

    // tree
    auto* treeCmd = app.add_subcommand("tree", "Run a probabilistic convolution tree");
    std::string priorsPath;
    std::string sumPath;
    std::string opName = "sum";
    std::string treeOut;
    treeCmd->add_option("--priors", priorsPath, "Prior PMFs, one JSON object per line")
        ->required()
        ->check(CLI::ExistingFile);
    treeCmd->add_option("--sum", sumPath, "Likelihood on the sum (JSON)")->required()->check(CLI::ExistingFile);
    treeCmd->add_option("--op", opName, "sum, max-naive, max-numeric or pnorm:<p>")->capture_default_str();
    treeCmd->add_option("--out", treeOut, "Output JSON")->required();

    // bench
    auto* benchCmd = app.add_subcommand("bench", "Speed and accuracy experiments");
    benchCmd->require_subcommand(1);
    std::uint64_t seed = 1;
    std::string benchOut;

    auto* speedCmd = benchCmd->add_subcommand("speed", "Naive vs numeric max-convolution wall time");
    std::vector<std::size_t> speedKs = defaultSpeedKs();
    std::size_t speedReplicates = 5;
    speedCmd->add_option("--k-list", speedKs, "Vector lengths")->delimiter(',')->capture_default_str();
    speedCmd->add_option("--replicates", speedReplicates, "Replicates per k")->capture_default_str();
    speedCmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    speedCmd->add_option("--out", benchOut, "Output CSV")->required();

    auto* accuracyCmd = benchCmd->add_subcommand("accuracy", "Relative error of the numeric method per p*");
    std::vector<std::size_t> accuracyKs = defaultAccuracyKs();
    std::vector<double> accuracyPs = defaultAccuracyPs();
    std::size_t accuracyReplicates = 64;
    accuracyCmd->add_option("--k-list", accuracyKs, "Vector lengths")->delimiter(',')->capture_default_str();
    accuracyCmd->add_option("--p-list", accuracyPs, "p* values")->delimiter(',')->capture_default_str();
    accuracyCmd->add_option("--replicates", accuracyReplicates, "Random pairs per (k, p*)")->capture_default_str();
    accuracyCmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    accuracyCmd->add_option("--out", benchOut, "Output CSV")->required();

    // demo
    auto* demoCmd = app.add_subcommand("demo", "Worked examples");
    demoCmd->require_subcommand(1);
    auto* subsetCmd = demoCmd->add_subcommand("subset-sum", "Probabilistic subset-sum inference");
    std::size_t demoN = 32;
    std::size_t demoK = 256;
    std::vector<std::string> modeNames{"naive-max", "numeric-max", "sum-product"};
    std::string outDir;
    subsetCmd->add_option("--n", demoN, "Number of variables")->capture_default_str();
    subsetCmd->add_option("--k", demoK, "Bins per variable")->capture_default_str();
    subsetCmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    subsetCmd->add_option("--modes", modeNames, "naive-max, numeric-max, sum-product")
        ->delimiter(',')
        ->check(CLI::IsMember({"naive-max", "numeric-max", "sum-product"}))
        ->capture_default_str();
    subsetCmd->add_option("--out-dir", outDir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*maxconvCmd) {
            const Pmf left = readPmf(leftPath);
            const Pmf right = readPmf(rightPath);
            const PiecewiseConfig config = makeConfig(ladder, tau);
            Pmf result = Pmf::delta(0);
            if (method == "naive") {
                result = naiveMaxConvolve(left, right);
            } else if (method == "numeric") {
                result = maxConvolvePiecewise(left, right, config);
            } else {
                result = maxConvolveAuto(left, right, config);
            }
            writePmf(maxconvOut, result);
        } else if (*treeCmd) {
            const auto priors = readPmfLines(priorsPath);
            const Pmf evidence = readPmf(sumPath);
            const ConvolutionOperator op = ConvolutionOperator::parse(opName);
            const TreeResult res = convolutionTree(priors, evidence, op);
            nlohmann::json likelihoods = nlohmann::json::array();
            for (const Pmf& p : res.likelihoods) {
                likelihoods.push_back(toJson(p));
            }
            openOutput(treeOut) << nlohmann::json{{"operator", op.name},
                                                  {"likelihoods", std::move(likelihoods)},
                                                  {"sum_prior", toJson(res.sumPrior)}}
                                       .dump()
                                << '\n';
        } else if (*speedCmd) {
            const auto records = runSpeedBench(speedKs, speedReplicates, seed);
            auto out = openOutput(benchOut);
            writeSpeedCsv(out, records);
            for (const std::size_t k : speedKs) {
                std::vector<double> naive;
                std::vector<double> numeric;
                for (const auto& r : records) {
                    if (r.k == k) {
                        (r.method == BenchMethod::Naive ? naive : numeric).push_back(r.wallSeconds);
                    }
                }
                std::cout << "k=" << k << " median naive " << median(naive) << " s, numeric "
                          << median(numeric) << " s\n";
            }
        } else if (*accuracyCmd) {
            std::vector<PStar> ps;
            for (double p : accuracyPs) {
                ps.emplace_back(p);
            }
            auto out = openOutput(benchOut);
            writeAccuracyCsvHeader(out);
            runAccuracySweep(accuracyKs, ps, accuracyReplicates, seed,
                             [&](const AccuracyRow& row) { writeAccuracyCsvRow(out, row); });
        } else if (*subsetCmd) {
            std::vector<DemoMode> modes;
            for (const auto& name : modeNames) {
                modes.push_back(parseDemoMode(name));
            }
            const auto report = runSubsetSumDemo(demoN, demoK, seed, modes);
            writeSubsetSumReport(outDir, report);
            for (const auto& m : report.modes) {
                std::cout << toString(m.mode) << ": " << m.wallSeconds << " s, "
                          << m.fractionNearTruth(report.instance.trueMeans, 3.0, true) * 100.0
                          << "% of posterior argmaxes within 3 bins of the true mean ("
                          << m.fractionNearTruth(report.instance.trueMeans, 3.0) * 100.0
                          << "% for likelihood argmaxes)\n";
            }
            if (const auto agreement = report.numericNaiveArgmaxAgreement()) {
                std::cout << "numeric/naive argmax agreement: " << *report.numericNaiveArgmaxAgreement(true) * 100.0
                          << "% posterior, " << *agreement * 100.0 << "% likelihood\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
