#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "maxconv/pmf.hpp"

namespace maxconv {

enum class ConvMethod { Naive, Fast };

std::string_view toString(ConvMethod method) noexcept;

// Transform length for embedding a linear convolution of kL and kR values.
struct ConvPlan {
    std::size_t paddedLength;

    static ConvPlan forLengths(std::size_t kL, std::size_t kR);
};

// Smallest power of two >= n (n >= 1).
std::size_t nextPowerOfTwo(std::size_t n) noexcept;

// Linear convolution through a real-input FFT of length ConvPlan::paddedLength,
// or directly when chooseNaiveOrFast prefers it. Round-off below zero is
// clamped so every output is a valid mass.
Pmf fastConvolve(const Pmf& a, const Pmf& b);

// Same as fastConvolve on raw sequences; out must hold a.size() + b.size() - 1
// values. Used by callers that manage their own buffers.
void convolveInto(std::span<const double> a, std::span<const double> b, std::span<double> out);

// "naive" when kL * kR <= crossover * k' * log2(k'), k' the padded length.
// A length-1 operand is a scalar scale and always goes naive.
ConvMethod chooseNaiveOrFast(std::size_t kL, std::size_t kR, double crossover = 1.0);

}  // namespace maxconv
