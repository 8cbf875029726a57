#include "scma/mpa.hpp"

#include <algorithm>
#include <limits>

namespace scma {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void normalise(std::vector<double>& table)
{
    const double mx = *std::max_element(table.begin(), table.end());
    for (auto& v : table)
        v -= mx;
}

} // namespace

MpaResult log_mpa_detect(const CVector& y, const CMatrix& g, const ScmaSystem& sys, double noise_variance,
                         std::size_t iterations, double clamp)
{
    const auto& cfg = sys.config;
    const auto& s = sys.mapping;
    if (iterations == 0)
        throw Error("MPA needs at least one iteration");
    if (!(noise_variance > 0.0))
        throw Error("noise variance must be positive");
    if (g.rows() != cfg.resources || g.cols() != cfg.layers || y.size() != cfg.resources)
        throw Error("log_mpa_detect: dimension mismatch");

    const std::size_t n_res = cfg.resources;
    const std::size_t m = cfg.points;
    const std::size_t d_f = s.layers_per_resource();
    std::size_t full = 1;
    for (std::size_t i = 0; i < d_f; ++i)
        full *= m;
    const std::size_t others = full / m; // M^{d_f - 1}

    OpCounters ops;

    // Function-node tables: -|y_n - sum_i g_{n,i} x_i|^2 / sigma^2 for every
    // combination, index = sum_i c_i M^{d_f-1-i} over F_n in ascending order.
    std::vector<std::vector<double>> table(n_res, std::vector<double>(full));
    for (std::size_t n = 0; n < n_res; ++n) {
        const auto& f = s.layer_set(n);
        for (std::size_t idx = 0; idx < full; ++idx) {
            Complex r = y[n];
            std::size_t rem = idx;
            for (std::size_t i = d_f; i-- > 0;) {
                const std::size_t layer = f[i];
                const std::size_t c = rem % m;
                rem /= m;
                r -= g(n, layer) * sys.codebook.point(layer / cfg.dims, c)[layer % cfg.dims];
            }
            table[n][idx] = -std::norm(r) / noise_variance;
            // Each of the d_f edges is charged its own distance evaluation.
            ops.real_mults += d_f * 4 * d_f;
            ops.real_adds += d_f * (4 * d_f - 2);
        }
        ops.real_mults += 5 * d_f * m;
        ops.real_adds += 5 * d_f * m;
    }

    // Edge (n, i) connects resource n to the user owning layer F_n[i].
    std::vector<std::vector<std::vector<double>>> to_user(n_res, std::vector<std::vector<double>>(d_f, std::vector<double>(m, 0.0)));
    auto to_resource = to_user;

    struct Edge {
        std::size_t resource, slot;
    };
    std::vector<std::vector<Edge>> user_edges(cfg.users);
    for (std::size_t n = 0; n < n_res; ++n)
        for (std::size_t i = 0; i < d_f; ++i)
            user_edges[s.layer_set(n)[i] / cfg.dims].push_back({n, i});

    std::vector<std::size_t> digits(d_f);
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t n = 0; n < n_res; ++n) {
            auto& out = to_user[n];
            for (auto& msg : out)
                std::fill(msg.begin(), msg.end(), kNegInf);
            const auto& in = to_resource[n];
            for (std::size_t idx = 0; idx < full; ++idx) {
                std::size_t rem = idx;
                for (std::size_t i = d_f; i-- > 0;) {
                    digits[i] = rem % m;
                    rem /= m;
                }
                double base = table[n][idx];
                for (std::size_t i = 0; i < d_f; ++i)
                    base += in[i][digits[i]];
                for (std::size_t i = 0; i < d_f; ++i)
                    out[i][digits[i]] = max_star(out[i][digits[i]], base - in[i][digits[i]]);
            }
            for (std::size_t i = 0; i < d_f; ++i) {
                normalise(out[i]);
                ops.real_adds += others; // shared partial sums of this edge
                ops.real_adds += m * 2 * others;
                ops.exp_log += m * (others + 1);
            }
        }
        for (std::size_t k = 0; k < cfg.users; ++k) {
            const auto& edges = user_edges[k];
            for (std::size_t c = 0; c < m; ++c) {
                double total = 0.0;
                for (const auto& e : edges)
                    total += to_user[e.resource][e.slot][c];
                for (const auto& e : edges)
                    to_resource[e.resource][e.slot][c] = total - to_user[e.resource][e.slot][c];
                ops.real_adds += (edges.size() - 1) + edges.size();
            }
            for (const auto& e : edges)
                normalise(to_resource[e.resource][e.slot]);
        }
    }
    ops.exp_log += 1;

    MpaResult res;
    res.beliefs.assign(cfg.users, std::vector<double>(m, 0.0));
    std::vector<std::size_t> decisions(cfg.users, 0);
    const std::size_t bits = cfg.bits_per_symbol();
    res.llr.users = cfg.users;
    res.llr.bits_per_symbol = bits;
    res.llr.clamp = clamp;
    res.llr.list_size = 0;
    for (std::size_t k = 0; k < cfg.users; ++k) {
        auto& b = res.beliefs[k];
        for (const auto& e : user_edges[k])
            for (std::size_t c = 0; c < m; ++c)
                b[c] += to_user[e.resource][e.slot][c];
        normalise(b);
        decisions[k] = static_cast<std::size_t>(std::max_element(b.begin(), b.end()) - b.begin());
        for (std::size_t bit = 0; bit < bits; ++bit) {
            double zero = kNegInf, one = kNegInf;
            for (std::size_t c = 0; c < m; ++c) {
                if ((c >> (bits - 1 - bit)) & 1u)
                    one = max_star(one, b[c]);
                else
                    zero = max_star(zero, b[c]);
            }
            res.llr.values.push_back(std::clamp(zero - one, -clamp, clamp));
        }
    }

    auto& det = res.detection;
    det.codewords = decisions;
    det.symbols.assign(cfg.layers, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < cfg.users; ++k)
        for (std::size_t l = 0; l < cfg.dims; ++l)
            det.symbols[k * cfg.dims + l] = sys.codebook.point(k, decisions[k])[l];
    det.bits = codeword_bits(decisions, bits);
    det.metric = residual_energy(g, y, det.symbols);
    det.counters = ops;
    return res;
}

} // namespace scma
