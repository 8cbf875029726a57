#include "scma/ml_oracle.hpp"

#include <algorithm>
#include <limits>

namespace scma {

namespace {

// Per-user received contribution of every codeword: contrib[k][c][n].
std::vector<std::vector<CVector>> contributions(const CMatrix& g, const ScmaSystem& sys)
{
    const auto& cfg = sys.config;
    std::vector<std::vector<CVector>> out(cfg.users, std::vector<CVector>(cfg.points, CVector(g.rows())));
    for (std::size_t k = 0; k < cfg.users; ++k)
        for (std::size_t c = 0; c < cfg.points; ++c)
            for (std::size_t l = 0; l < cfg.dims; ++l) {
                const Complex x = sys.codebook.point(k, c)[l];
                for (std::size_t n = 0; n < g.rows(); ++n)
                    out[k][c][n] += g(n, k * cfg.dims + l) * x;
            }
    return out;
}

struct Search {
    const std::vector<std::vector<CVector>>& contrib;
    std::size_t users;
    std::size_t points;
    std::vector<std::size_t> current;
    std::vector<std::size_t> best;
    double best_metric = std::numeric_limits<double>::infinity();

    // Lexicographic enumeration: the first strictly smaller metric wins ties.
    void exhaustive(std::size_t k, const CVector& residual)
    {
        CVector r(residual.size());
        for (std::size_t c = 0; c < points; ++c) {
            current[k] = c;
            const CVector& v = contrib[k][c];
            if (k + 1 == users) {
                double m = 0.0;
                for (std::size_t n = 0; n < residual.size(); ++n)
                    m += std::norm(residual[n] - v[n]);
                if (m < best_metric) {
                    best_metric = m;
                    best = current;
                }
            } else {
                for (std::size_t n = 0; n < residual.size(); ++n)
                    r[n] = residual[n] - v[n];
                exhaustive(k + 1, r);
            }
        }
    }
};

std::vector<std::size_t> support(const std::vector<CVector>& user_contrib)
{
    std::vector<std::size_t> rows;
    for (std::size_t n = 0; n < user_contrib[0].size(); ++n)
        if (std::any_of(user_contrib.begin(), user_contrib.end(),
                        [n](const CVector& v) { return v[n] != Complex(0.0, 0.0); }))
            rows.push_back(n);
    return rows;
}

std::vector<std::size_t> separable_search(const CVector& y, const std::vector<std::vector<CVector>>& contrib,
                                          std::size_t points)
{
    const std::size_t users = contrib.size();
    const std::size_t rows = y.size();

    // Greedy set of users with pairwise-disjoint row supports.
    std::vector<std::size_t> inner;
    std::vector<std::vector<std::size_t>> inner_rows;
    std::vector<bool> taken(rows, false);
    for (std::size_t k = 0; k < users; ++k) {
        auto s = support(contrib[k]);
        if (std::none_of(s.begin(), s.end(), [&](std::size_t n) { return taken[n]; })) {
            for (auto n : s)
                taken[n] = true;
            inner.push_back(k);
            inner_rows.push_back(std::move(s));
        }
    }
    std::vector<std::size_t> outer;
    for (std::size_t k = 0; k < users; ++k)
        if (std::find(inner.begin(), inner.end(), k) == inner.end())
            outer.push_back(k);

    std::vector<std::size_t> current(users, 0), best(users, 0);
    double best_metric = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> digits(outer.size(), 0);
    while (true) {
        CVector r = y;
        for (std::size_t i = 0; i < outer.size(); ++i) {
            current[outer[i]] = digits[i];
            const CVector& v = contrib[outer[i]][digits[i]];
            for (std::size_t n = 0; n < rows; ++n)
                r[n] -= v[n];
        }
        double total = 0.0;
        for (std::size_t n = 0; n < rows; ++n)
            if (!taken[n])
                total += std::norm(r[n]);
        for (std::size_t i = 0; i < inner.size(); ++i) {
            double bm = std::numeric_limits<double>::infinity();
            std::size_t bc = 0;
            for (std::size_t c = 0; c < points; ++c) {
                double m = 0.0;
                for (auto n : inner_rows[i])
                    m += std::norm(r[n] - contrib[inner[i]][c][n]);
                if (m < bm) {
                    bm = m;
                    bc = c;
                }
            }
            current[inner[i]] = bc;
            total += bm;
        }
        if (total < best_metric || (total == best_metric && current < best)) {
            best_metric = total;
            best = current;
        }

        std::size_t i = outer.size();
        while (i > 0 && ++digits[i - 1] == points)
            digits[--i] = 0;
        if (i == 0)
            break;
    }
    return best;
}

std::uint64_t hypothesis_count(std::size_t points, std::size_t users)
{
    std::uint64_t h = 1;
    for (std::size_t k = 0; k < users; ++k)
        h *= points;
    return h;
}

} // namespace

DetectionResult ml_detect(const CVector& y, const CMatrix& g, const ScmaSystem& sys, MlStrategy strategy)
{
    const auto& cfg = sys.config;
    if (g.rows() != cfg.resources || g.cols() != cfg.layers || y.size() != cfg.resources)
        throw Error("ml_detect: dimension mismatch");
    const auto contrib = contributions(g, sys);
    const std::uint64_t hyps = hypothesis_count(cfg.points, cfg.users);
    if (strategy == MlStrategy::automatic)
        strategy = hyps > 65536 ? MlStrategy::separable : MlStrategy::exhaustive;

    std::vector<std::size_t> best;
    if (strategy == MlStrategy::exhaustive) {
        Search s{contrib, cfg.users, cfg.points, std::vector<std::size_t>(cfg.users, 0), {}};
        s.exhaustive(0, y);
        best = s.best;
    } else {
        best = separable_search(y, contrib, cfg.points);
    }

    DetectionResult r;
    r.codewords = best;
    CVector x(cfg.layers);
    for (std::size_t k = 0; k < cfg.users; ++k)
        for (std::size_t l = 0; l < cfg.dims; ++l)
            x[k * cfg.dims + l] = sys.codebook.point(k, best[k])[l];
    r.symbols = x;
    r.bits = codeword_bits(best, cfg.bits_per_symbol());
    r.metric = residual_energy(g, y, x);
    r.hypotheses = hyps;
    return r;
}

LlrFrame exhaustive_app_llr(const AugmentedSystem& sys, const DetectionLayout& layout, double noise_variance,
                            double clamp)
{
    if (!(noise_variance > 0.0))
        throw Error("noise variance must be positive");
    const std::size_t users = layout.users();
    const std::size_t bits = layout.bits_per_symbol();
    const std::size_t points = layout.points();
    const std::size_t n_res = sys.resources;
    const std::uint64_t total = hypothesis_count(points, users);

    std::vector<double> scores(total);
    std::vector<std::size_t> cw(users, 0);
    for (std::uint64_t h = 0; h < total; ++h) {
        std::uint64_t rem = h;
        for (std::size_t k = users; k-- > 0;) {
            cw[k] = rem % points;
            rem /= points;
        }
        const CVector x = layout.search_vector(cw);
        double tail = 0.0;
        for (std::size_t c = n_res; c < x.size(); ++c)
            tail += std::norm(x[c]);
        scores[h] = -(residual_energy(sys.g_tilde, sys.y_tilde, x) - tail) / noise_variance;
    }

    auto log_sum_exp = [&](std::size_t k, std::size_t m, unsigned bit) {
        const std::uint64_t stride = hypothesis_count(points, users - 1 - k);
        auto selected = [&](std::uint64_t h) { return (((h / stride) % points) >> (bits - 1 - m) & 1u) == bit; };
        double mx = -std::numeric_limits<double>::infinity();
        for (std::uint64_t h = 0; h < total; ++h)
            if (selected(h))
                mx = std::max(mx, scores[h]);
        double acc = 0.0;
        for (std::uint64_t h = 0; h < total; ++h)
            if (selected(h))
                acc += std::exp(scores[h] - mx);
        return mx + std::log(acc);
    };

    LlrFrame f;
    f.users = users;
    f.bits_per_symbol = bits;
    f.clamp = clamp;
    f.list_size = total;
    for (std::size_t k = 0; k < users; ++k)
        for (std::size_t m = 0; m < bits; ++m)
            f.values.push_back(std::clamp(log_sum_exp(k, m, 0) - log_sum_exp(k, m, 1), -clamp, clamp));
    return f;
}

} // namespace scma
