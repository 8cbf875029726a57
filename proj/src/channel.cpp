#include "scma/channel.hpp"

#include <cmath>

namespace scma {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Complex complex_normal(Rng& rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

} // namespace

Rng trial_stream(std::uint64_t seed, std::uint64_t index)
{
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

ChannelModel parse_channel_model(const std::string& s)
{
    if (s == "awgn")
        return ChannelModel::awgn;
    if (s == "rayleigh" || s == "rayleigh-flat")
        return ChannelModel::rayleigh_flat;
    throw Error("unknown channel model '" + s + "' (expected awgn or rayleigh-flat)");
}

const char* to_string(ChannelModel m) noexcept
{
    return m == ChannelModel::awgn ? "awgn" : "rayleigh-flat";
}

ChannelRealization sample_channel(const SystemConfig& cfg, ChannelModel model, double noise_variance, Rng& rng)
{
    ChannelRealization h;
    h.model = model;
    h.noise_variance = noise_variance;
    h.gains.assign(cfg.users, std::vector<Complex>(cfg.dims, Complex(1.0, 0.0)));
    if (model == ChannelModel::rayleigh_flat) {
        for (auto& user : h.gains) {
            Complex g;
            do {
                g = complex_normal(rng);
            } while (g == Complex(0.0, 0.0));
            for (auto& v : user)
                v = g;
        }
    }
    return h;
}

CMatrix effective_channel(const MappingMatrix& s, const ChannelRealization& h)
{
    const std::size_t dims = s.dims();
    CMatrix g(s.resources(), s.layers());
    for (std::size_t layer = 0; layer < s.layers(); ++layer)
        g(s.resource_of_layer(layer), layer) = h.gains.at(layer / dims).at(layer % dims);
    return g;
}

CVector draw_noise(std::size_t n, double noise_variance, Rng& rng)
{
    const double scale = std::sqrt(noise_variance);
    CVector w(n);
    for (auto& v : w)
        v = scale * complex_normal(rng);
    return w;
}

CVector receive(const CMatrix& g, const CVector& x, const CVector& noise)
{
    CVector y = multiply(g, x);
    for (std::size_t n = 0; n < y.size(); ++n)
        y[n] += noise.at(n);
    return y;
}

AugmentedSystem augment(const CMatrix& g, const CVector& y)
{
    const std::size_t n_res = g.rows();
    const std::size_t cols = g.cols();
    if (y.size() != n_res)
        throw Error("observation length differs from channel rows");
    if (cols < n_res)
        throw Error("channel has fewer columns than rows");
    for (std::size_t r = 0; r < n_res; ++r)
        for (std::size_t c = 0; c < r; ++c)
            if (g(r, c) != Complex(0.0, 0.0))
                throw Error("leading channel block is not upper triangular; relabel users and resources first");
    for (std::size_t r = 0; r < n_res; ++r)
        if (g(r, r) == Complex(0.0, 0.0))
            throw Error("degenerate channel; resample");

    AugmentedSystem a;
    a.resources = n_res;
    a.g_tilde = CMatrix(cols, cols);
    for (std::size_t r = 0; r < n_res; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            a.g_tilde(r, c) = g(r, c);
    for (std::size_t r = n_res; r < cols; ++r)
        a.g_tilde(r, r) = 1.0;
    a.y_tilde.assign(cols, Complex(0.0, 0.0));
    for (std::size_t r = 0; r < n_res; ++r)
        a.y_tilde[r] = y[r];
    return a;
}

double noise_variance_for_snr(const ScmaSystem& sys, double snr_db)
{
    const auto& cfg = sys.config;
    const double per_resource = static_cast<double>(cfg.users) * sys.codebook.average_energy() /
                                static_cast<double>(cfg.resources);
    return per_resource / std::pow(10.0, snr_db / 10.0);
}

} // namespace scma
