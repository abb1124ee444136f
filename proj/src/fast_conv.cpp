#include "maxconv/fast_conv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace maxconv {

std::string_view toString(ConvMethod method) noexcept {
    return method == ConvMethod::Naive ? "naive" : "fast";
}

std::size_t nextPowerOfTwo(std::size_t n) noexcept {
    return std::bit_ceil(std::max<std::size_t>(n, 1));
}

ConvPlan ConvPlan::forLengths(std::size_t kL, std::size_t kR) {
    return ConvPlan{nextPowerOfTwo(kL + kR - 1)};
}

ConvMethod chooseNaiveOrFast(std::size_t kL, std::size_t kR, double crossover) {
    if (kL <= 1 || kR <= 1) {
        return ConvMethod::Naive;
    }
    const auto padded = static_cast<double>(ConvPlan::forLengths(kL, kR).paddedLength);
    const double quadratic = static_cast<double>(kL) * static_cast<double>(kR);
    return quadratic <= crossover * padded * std::log2(padded) ? ConvMethod::Naive
                                                               : ConvMethod::Fast;
}

namespace {

struct FftwDeleter {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> allocate(std::size_t count) {
    auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (raw == nullptr) {
        throw std::bad_alloc();
    }
    return FftwBuffer<T>(raw);
}

// Plans are created once per length and executed through the new-array
// interface, which FFTW documents as thread-safe. Planning itself is not,
// so the cache is guarded.
struct PlanPair {
    fftw_plan forward;
    fftw_plan inverse;
};

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [n, plans] : plans_) {
            fftw_destroy_plan(plans.forward);
            fftw_destroy_plan(plans.inverse);
        }
    }

    PlanPair get(std::size_t n) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(n); it != plans_.end()) {
            return it->second;
        }
        auto real = allocate<double>(n);
        auto spectrum = allocate<fftw_complex>(n / 2 + 1);
        const int len = static_cast<int>(n);
        PlanPair plans{
            fftw_plan_dft_r2c_1d(len, real.get(), spectrum.get(), FFTW_ESTIMATE),
            fftw_plan_dft_c2r_1d(len, spectrum.get(), real.get(), FFTW_ESTIMATE),
        };
        plans_.emplace(n, plans);
        return plans;
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, PlanPair> plans_;
};

PlanCache& planCache() {
    static PlanCache cache;
    return cache;
}

// Per-thread transform buffers, grown on demand and reused across calls.
struct Scratch {
    std::size_t capacity = 0;
    FftwBuffer<double> realA, realB;
    FftwBuffer<fftw_complex> specA, specB;

    void reserve(std::size_t n) {
        if (n <= capacity) {
            return;
        }
        realA = allocate<double>(n);
        realB = allocate<double>(n);
        specA = allocate<fftw_complex>(n / 2 + 1);
        specB = allocate<fftw_complex>(n / 2 + 1);
        capacity = n;
    }
};

void naiveConvolveInto(std::span<const double> a, std::span<const double> b,
                       std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        double* row = out.data() + i;
        for (std::size_t j = 0; j < b.size(); ++j) {
            row[j] += ai * b[j];
        }
    }
}

}  // namespace

void convolveInto(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    if (a.empty() || b.empty() || out.size() != a.size() + b.size() - 1) {
        throw std::invalid_argument("convolveInto: output length must be kL + kR - 1");
    }
    if (chooseNaiveOrFast(a.size(), b.size()) == ConvMethod::Naive) {
        naiveConvolveInto(a, b, out);
        return;
    }

    const std::size_t n = ConvPlan::forLengths(a.size(), b.size()).paddedLength;
    const std::size_t bins = n / 2 + 1;
    const PlanPair plans = planCache().get(n);

    thread_local Scratch scratch;
    scratch.reserve(n);
    double* realA = scratch.realA.get();
    double* realB = scratch.realB.get();
    fftw_complex* specA = scratch.specA.get();
    fftw_complex* specB = scratch.specB.get();

    std::fill(std::copy(a.begin(), a.end(), realA), realA + n, 0.0);
    std::fill(std::copy(b.begin(), b.end(), realB), realB + n, 0.0);

    fftw_execute_dft_r2c(plans.forward, realA, specA);
    fftw_execute_dft_r2c(plans.forward, realB, specB);

    for (std::size_t i = 0; i < bins; ++i) {
        const double re = specA[i][0] * specB[i][0] - specA[i][1] * specB[i][1];
        const double im = specA[i][0] * specB[i][1] + specA[i][1] * specB[i][0];
        specA[i][0] = re;
        specA[i][1] = im;
    }

    fftw_execute_dft_c2r(plans.inverse, specA, realA);

    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::max(0.0, realA[i] * scale);
    }
}

Pmf fastConvolve(const Pmf& a, const Pmf& b) {
    if (chooseNaiveOrFast(a.size(), b.size()) == ConvMethod::Naive) {
        return naiveConvolve(a, b);
    }
    std::vector<double> out(a.size() + b.size() - 1);
    convolveInto(a.values(), b.values(), out);
    return Pmf(std::move(out), a.offset() + b.offset());
}

}  // namespace maxconv
