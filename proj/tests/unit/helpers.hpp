#pragma once

#include "scma/channel.hpp"
#include "scma/codebook.hpp"
#include "scma/layout.hpp"

namespace scma::test {

struct Instance {
    std::vector<std::size_t> sent;
    CVector x;
    CMatrix g;
    CVector y;
    double noise_variance = 0.0;
};

inline CVector stack(const ScmaSystem& sys, const std::vector<std::size_t>& codewords)
{
    const std::size_t d = sys.config.dims;
    CVector x(sys.config.layers);
    for (std::size_t k = 0; k < codewords.size(); ++k)
        for (std::size_t l = 0; l < d; ++l)
            x[k * d + l] = sys.codebook.point(k, codewords[k])[l];
    return x;
}

inline Instance random_instance(const ScmaSystem& sys, double snr_db, ChannelModel model, Rng& rng,
                                bool noise = true)
{
    Instance in;
    in.noise_variance = noise_variance_for_snr(sys, snr_db);
    std::uniform_int_distribution<std::size_t> pick(0, sys.config.points - 1);
    in.sent.resize(sys.config.users);
    for (auto& c : in.sent)
        c = pick(rng);
    in.x = stack(sys, in.sent);
    in.g = effective_channel(sys.mapping, sample_channel(sys.config, model, in.noise_variance, rng));
    in.y = noise ? receive(in.g, in.x, draw_noise(sys.config.resources, in.noise_variance, rng))
                 : receive(in.g, in.x, CVector(sys.config.resources));
    return in;
}

inline double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace scma::test
