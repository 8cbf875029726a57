#include "scma/detection.hpp"

#include <algorithm>

namespace scma {

std::vector<std::uint8_t> codeword_bits(std::span<const std::size_t> codewords, std::size_t bits_per_symbol)
{
    std::vector<std::uint8_t> bits;
    bits.reserve(codewords.size() * bits_per_symbol);
    for (auto c : codewords)
        for (std::size_t m = 0; m < bits_per_symbol; ++m)
            bits.push_back(static_cast<std::uint8_t>((c >> (bits_per_symbol - 1 - m)) & 1u));
    return bits;
}

LlrAccumulator::LlrAccumulator(std::size_t users, std::size_t bits_per_symbol, double noise_variance, double clamp)
    : users_(users), bits_(bits_per_symbol), inv_noise_(1.0 / noise_variance), clamp_(clamp),
      zero_(users * bits_per_symbol, -std::numeric_limits<double>::infinity()),
      one_(users * bits_per_symbol, -std::numeric_limits<double>::infinity())
{
    if (!(noise_variance > 0.0))
        throw Error("noise variance must be positive");
    if (!(clamp > 0.0))
        throw Error("LLR clamp must be positive");
}

void LlrAccumulator::add(std::span<const std::size_t> codewords, double metric)
{
    const double score = -metric * inv_noise_;
    for (std::size_t k = 0; k < users_; ++k)
        for (std::size_t m = 0; m < bits_; ++m) {
            const bool one = (codewords[k] >> (bits_ - 1 - m)) & 1u;
            double& acc = one ? one_[k * bits_ + m] : zero_[k * bits_ + m];
            acc = max_star(acc, score);
        }
    ++count_;
}

LlrFrame LlrAccumulator::finish() const
{
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    LlrFrame f;
    f.users = users_;
    f.bits_per_symbol = bits_;
    f.clamp = clamp_;
    f.list_size = count_;
    f.values.resize(users_ * bits_);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        double v;
        if (zero_[i] == ninf && one_[i] == ninf)
            v = 0.0;
        else if (one_[i] == ninf)
            v = clamp_;
        else if (zero_[i] == ninf)
            v = -clamp_;
        else
            v = std::clamp(zero_[i] - one_[i], -clamp_, clamp_);
        f.values[i] = v;
    }
    return f;
}

} // namespace scma
