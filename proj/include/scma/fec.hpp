#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scma/linalg.hpp"

namespace scma {

/// Rate-1/3 feedforward convolutional code, constraint length 7, generators
/// 133, 171, 165 (octal), zero-terminated with 6 tail bits.
class ConvolutionalCode {
public:
    static constexpr unsigned kConstraint = 7;
    static constexpr unsigned kMemory = kConstraint - 1;
    static constexpr unsigned kOutputs = 3;
    static constexpr unsigned kGenerators[kOutputs] = {0133, 0171, 0165};

    /// Info bits carried by a codeword of length n. Throws unless n is a
    /// multiple of 3 leaving at least one info bit.
    static std::size_t info_length(std::size_t codeword_length);

    static std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info);

    /// Soft-input Viterbi decoding. One LLR per code bit, positive favouring 0.
    /// Returns the info bits of the most likely terminated path.
    static std::vector<std::uint8_t> decode(std::span<const double> llrs);
};

/// Fixed permutation pi(i) = (i * p) mod n, with p the smallest prime above
/// sqrt(n) that does not divide n. interleave(v)[i] = v[pi(i)].
class Interleaver {
public:
    explicit Interleaver(std::size_t n);

    std::size_t size() const noexcept { return perm_.size(); }
    std::size_t operator[](std::size_t i) const { return perm_[i]; }

    template <typename T>
    std::vector<T> interleave(std::span<const T> in) const
    {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            out[i] = in[perm_[i]];
        return out;
    }

    template <typename T>
    std::vector<T> deinterleave(std::span<const T> in) const
    {
        check(in.size());
        std::vector<T> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            out[perm_[i]] = in[i];
        return out;
    }

private:
    void check(std::size_t n) const
    {
        if (n != perm_.size())
            throw Error("interleaver length mismatch");
    }
    std::vector<std::size_t> perm_;
};

} // namespace scma
