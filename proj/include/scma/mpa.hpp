#pragma once

#include "scma/codebook.hpp"
#include "scma/detection.hpp"

namespace scma {

struct MpaResult {
    DetectionResult detection;
    LlrFrame llr;
    std::vector<std::vector<double>> beliefs; // [user][codeword], log domain, max-normalised
};

/// Log-domain message passing over the factor graph of resources (function
/// nodes) and users (variable nodes) with a flooding schedule: every
/// iteration updates all resource-to-user messages, then all user-to-resource
/// messages. Function-node updates marginalise over the M^{d_f - 1}
/// codeword combinations of the other users with max*. Initial messages are
/// uniform and each message table is shifted so its maximum is zero.
///
/// Operation counters follow the log-MPA accounting of the classic
/// complexity table, so they are input independent.
MpaResult log_mpa_detect(const CVector& y, const CMatrix& g, const ScmaSystem& sys, double noise_variance,
                         std::size_t iterations, double clamp = kDefaultLlrClamp);

} // namespace scma
