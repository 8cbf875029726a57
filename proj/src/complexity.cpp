#include "scma/complexity.hpp"

#include "scma/linalg.hpp"

namespace scma {

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint64_t e)
{
    std::uint64_t r = 1;
    while (e--)
        r *= b;
    return r;
}

} // namespace

OpCounters predicted_msd_ops(std::uint64_t d_f, std::uint64_t n_v1, std::uint64_t n_v2)
{
    OpCounters c;
    c.real_adds = (4 * d_f + 2) * n_v1 + 2 * n_v2;
    c.real_mults = c.real_adds;
    c.visited_head = n_v1;
    c.visited_tail = n_v2;
    return c;
}

OpCounters predicted_mpa_ops(std::uint64_t m, std::uint64_t n, std::uint64_t d_f, std::uint64_t d_v,
                             std::uint64_t iterations)
{
    if (m == 0 || n == 0 || d_f == 0 || d_v == 0 || iterations == 0)
        throw Error("complexity inputs must be positive");
    if ((n * d_f) % d_v != 0)
        throw Error("N d_f must be divisible by d_v");
    const std::uint64_t edges = n * d_f;      // N d_f = K'
    const std::uint64_t users = edges / d_v;  // K
    const std::uint64_t mdf = m * edges;      // M N d_f
    const std::uint64_t combos = ipow(m, d_f - 1);

    OpCounters c;
    // M N d_f (M^{d_f-1} (4 d_f - 2 + N_i (2 + 1/M)) + N_i (2 - 1/d_v) + 5), with the
    // fractional terms regrouped: M N d_f M^{d_f-1} / M = N d_f M^{d_f-1} and
    // M N d_f / d_v = M K.
    c.real_adds = mdf * (combos * (4 * d_f - 2) + iterations * 2 * combos + 2 * iterations + 5) +
                  iterations * edges * combos - iterations * m * users;
    c.real_mults = mdf * (4 * d_f * combos + 5);
    c.exp_log = mdf * iterations * (combos + 1) + 1;
    return c;
}

} // namespace scma
