#include "scma/fec.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace scma {

namespace {

constexpr unsigned kStates = 1u << ConvolutionalCode::kMemory;

// Output triple for input bit u entering state s (most recent input in the top bit).
unsigned branch_output(unsigned state, unsigned u)
{
    const unsigned reg = (u << ConvolutionalCode::kMemory) | state;
    unsigned out = 0;
    for (unsigned g : ConvolutionalCode::kGenerators)
        out = (out << 1) | (std::popcount(reg & g) & 1u);
    return out;
}

unsigned next_state(unsigned state, unsigned u)
{
    return ((u << ConvolutionalCode::kMemory) | state) >> 1;
}

bool is_prime(std::size_t v)
{
    if (v < 2)
        return false;
    for (std::size_t d = 2; d * d <= v; ++d)
        if (v % d == 0)
            return false;
    return true;
}

} // namespace

std::size_t ConvolutionalCode::info_length(std::size_t codeword_length)
{
    if (codeword_length % kOutputs != 0 || codeword_length / kOutputs <= kMemory)
        throw Error("codeword length " + std::to_string(codeword_length) + " is not supported by the rate-1/3 code");
    return codeword_length / kOutputs - kMemory;
}

std::vector<std::uint8_t> ConvolutionalCode::encode(std::span<const std::uint8_t> info)
{
    std::vector<std::uint8_t> out;
    out.reserve((info.size() + kMemory) * kOutputs);
    unsigned state = 0;
    auto push = [&](unsigned u) {
        const unsigned o = branch_output(state, u);
        for (unsigned j = kOutputs; j-- > 0;)
            out.push_back(static_cast<std::uint8_t>((o >> j) & 1u));
        state = next_state(state, u);
    };
    for (auto b : info)
        push(b & 1u);
    for (unsigned i = 0; i < kMemory; ++i)
        push(0);
    return out;
}

std::vector<std::uint8_t> ConvolutionalCode::decode(std::span<const double> llrs)
{
    if (llrs.size() % kOutputs != 0 || llrs.size() / kOutputs <= kMemory)
        throw Error("LLR length " + std::to_string(llrs.size()) + " does not match a terminated codeword");
    const std::size_t steps = llrs.size() / kOutputs;
    constexpr double ninf = -std::numeric_limits<double>::infinity();

    std::array<double, kStates> metric;
    metric.fill(ninf);
    metric[0] = 0.0;
    // survivor[t][s]: predecessor state and input bit packed as (prev << 1) | u.
    std::vector<std::array<std::uint16_t, kStates>> survivor(steps);

    for (std::size_t t = 0; t < steps; ++t) {
        std::array<double, kStates> next;
        next.fill(ninf);
        const bool tail = t + kMemory >= steps;
        for (unsigned s = 0; s < kStates; ++s) {
            if (metric[s] == ninf)
                continue;
            for (unsigned u = 0; u <= (tail ? 0u : 1u); ++u) {
                const unsigned o = branch_output(s, u);
                // Correlation metric: sum of +L for a 0 bit, -L for a 1 bit.
                double bm = 0.0;
                for (unsigned j = 0; j < kOutputs; ++j) {
                    const double l = llrs[t * kOutputs + j];
                    bm += ((o >> (kOutputs - 1 - j)) & 1u) ? -l : l;
                }
                const unsigned ns = next_state(s, u);
                const double cand = metric[s] + bm;
                if (cand > next[ns]) {
                    next[ns] = cand;
                    survivor[t][ns] = static_cast<std::uint16_t>((s << 1) | u);
                }
            }
        }
        metric = next;
    }

    std::vector<std::uint8_t> path(steps);
    unsigned state = 0;
    for (std::size_t t = steps; t-- > 0;) {
        const auto sv = survivor[t][state];
        path[t] = static_cast<std::uint8_t>(sv & 1u);
        state = sv >> 1;
    }
    path.resize(steps - kMemory);
    return path;
}

Interleaver::Interleaver(std::size_t n)
{
    if (n == 0)
        throw Error("interleaver length must be positive");
    std::size_t p = static_cast<std::size_t>(std::sqrt(static_cast<double>(n))) + 1;
    while (!is_prime(p) || std::gcd(p, n) != 1)
        ++p;
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        perm_[i] = (i * p) % n;
}

} // namespace scma
