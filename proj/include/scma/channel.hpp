#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "scma/codebook.hpp"

namespace scma {

using Rng = std::mt19937_64;

/// Independent generator for trial `index` of a run seeded with `seed`.
Rng trial_stream(std::uint64_t seed, std::uint64_t index);

enum class ChannelModel { awgn, rayleigh_flat };

ChannelModel parse_channel_model(const std::string& s);
const char* to_string(ChannelModel m) noexcept;

/// Diagonal per-user gains H_k plus the noise variance known to the receiver.
struct ChannelRealization {
    std::vector<std::vector<Complex>> gains; // [user][dim]
    double noise_variance = 0.0;             // per complex dimension
    ChannelModel model = ChannelModel::awgn;
};

/// Unit gains for AWGN; one CN(0,1) gain per user shared by its d_v resources
/// for flat Rayleigh. A gain that is exactly zero is redrawn.
ChannelRealization sample_channel(const SystemConfig& cfg, ChannelModel model, double noise_variance, Rng& rng);

/// G = [S_1 H_1, ..., S_K H_K], N x K'.
CMatrix effective_channel(const MappingMatrix& s, const ChannelRealization& h);

/// w ~ CN(0, sigma2 I).
CVector draw_noise(std::size_t n, double noise_variance, Rng& rng);

/// y = G x + w.
CVector receive(const CMatrix& g, const CVector& x, const CVector& noise);

/// Square upper-triangular system [G1 G2; 0 I] with observation [y; 0].
struct AugmentedSystem {
    CMatrix g_tilde;
    CVector y_tilde;
    std::size_t resources = 0; // N: rows above the identity block
};

/// Builds the augmented system from an N x L channel (L >= N). Throws if the
/// leading N x N block is not upper triangular, or "degenerate channel;
/// resample" if one of its diagonal gains is zero.
AugmentedSystem augment(const CMatrix& g, const CVector& y);

/// sigma^2 such that the mean received energy per resource over N0 equals
/// `snr_db`: sigma^2 = (K * E_s / N) / 10^(snr/10), with E_s the mean codeword
/// energy and unit-power gains.
double noise_variance_for_snr(const ScmaSystem& sys, double snr_db);

} // namespace scma
