#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "scma/complexity.hpp"
#include "scma/linalg.hpp"

namespace scma {

/// Default LLR saturation in nats.
inline constexpr double kDefaultLlrClamp = 30.0;

/// Hard decision of a multiuser detector.
struct DetectionResult {
    std::vector<std::size_t> codewords; // c_k per user
    CVector symbols;                    // x_hat, K' layer symbols
    std::vector<std::uint8_t> bits;     // K * L_M bits, user-major, MSB first
    double metric = 0.0;                // ||y - G x_hat||^2
    OpCounters counters;
    std::uint64_t hypotheses = 0; // full hypotheses covered (oracle only)
};

/// Per-user, per-bit log-likelihood ratios. Positive values favour bit 0.
struct LlrFrame {
    std::size_t users = 0;
    std::size_t bits_per_symbol = 0;
    std::vector<double> values; // user-major
    double clamp = kDefaultLlrClamp;
    std::size_t list_size = 0; // hypotheses that contributed

    double at(std::size_t user, std::size_t bit) const { return values[user * bits_per_symbol + bit]; }
    /// Sign decision: 0 when the LLR is nonnegative.
    std::uint8_t hard_bit(std::size_t user, std::size_t bit) const { return at(user, bit) < 0.0 ? 1 : 0; }
};

/// Jacobian logarithm log(e^a + e^b) = max(a, b) + log1p(exp(-|a - b|)).
/// -infinity is the identity element.
inline double max_star(double a, double b) noexcept
{
    if (a == -std::numeric_limits<double>::infinity())
        return b;
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

/// Left fold of max_star over a set, starting from -infinity.
inline double max_star(std::span<const double> values) noexcept
{
    double acc = -std::numeric_limits<double>::infinity();
    for (double v : values)
        acc = max_star(acc, v);
    return acc;
}

/// Unpacks codeword labels into K * L_M bits.
std::vector<std::uint8_t> codeword_bits(std::span<const std::size_t> codewords, std::size_t bits_per_symbol);

/// Builds an LlrFrame from scored hypotheses: lambda_{k,m} = max* over those
/// with c_{k,m} = 0 minus max* over those with c_{k,m} = 1 of -metric / sigma^2,
/// where metric = ||y - G x||^2. A side with no hypotheses yields +-clamp, and
/// every value is saturated to [-clamp, clamp].
class LlrAccumulator {
public:
    LlrAccumulator(std::size_t users, std::size_t bits_per_symbol, double noise_variance, double clamp);

    void add(std::span<const std::size_t> codewords, double metric);
    LlrFrame finish() const;

private:
    std::size_t users_;
    std::size_t bits_;
    double inv_noise_;
    double clamp_;
    std::size_t count_ = 0;
    std::vector<double> zero_; // max* accumulators, [user*bits + m]
    std::vector<double> one_;
};

} // namespace scma
