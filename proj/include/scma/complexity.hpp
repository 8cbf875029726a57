#pragma once

#include <cstdint>

namespace scma {

/// Real-arithmetic operation counts for one or more decodes.
struct OpCounters {
    std::uint64_t real_adds = 0;
    std::uint64_t real_mults = 0;
    std::uint64_t exp_log = 0;
    std::uint64_t visited_head = 0; // N_v1: metric evaluations on rows k' <= N
    std::uint64_t visited_tail = 0; // N_v2: metric evaluations on rows k' > N

    OpCounters& operator+=(const OpCounters& o) noexcept
    {
        real_adds += o.real_adds;
        real_mults += o.real_mults;
        exp_log += o.exp_log;
        visited_head += o.visited_head;
        visited_tail += o.visited_tail;
        return *this;
    }

    bool operator==(const OpCounters&) const = default;
};

/// Sphere decoder cost: (4 d_f + 2) N_v1 + 2 N_v2 real adds and as many real
/// multiplies; no exp/log.
OpCounters predicted_msd_ops(std::uint64_t d_f, std::uint64_t n_v1, std::uint64_t n_v2);

/// Log-domain message passing cost for M points, N resources, d_f layers per
/// resource, d_v resources per user and `iterations` flooding iterations.
/// Requires N d_f divisible by d_v.
OpCounters predicted_mpa_ops(std::uint64_t m, std::uint64_t n, std::uint64_t d_f, std::uint64_t d_v,
                             std::uint64_t iterations);

/// Adds + multiplies, with each exp/log charged as one multiply.
inline double combined_cost(const OpCounters& c) noexcept
{
    return static_cast<double>(c.real_adds) + static_cast<double>(c.real_mults) + static_cast<double>(c.exp_log);
}

} // namespace scma
