#pragma once

#include "scma/channel.hpp"
#include "scma/detection.hpp"
#include "scma/layout.hpp"

namespace scma {

enum class MlStrategy {
    automatic,  // separable when M^K exceeds 65536, exhaustive otherwise
    exhaustive, // evaluates ||y - Gx||^2 for every hypothesis
    separable,  // enumerates all but a set of resource-disjoint users, which are minimised independently
};

/// Global argmin of ||y - G x||^2 over all M^K hypotheses. Ties resolve to the
/// lexicographically smallest codeword tuple (user 0 most significant).
DetectionResult ml_detect(const CVector& y, const CMatrix& g, const ScmaSystem& sys,
                          MlStrategy strategy = MlStrategy::automatic);

/// Exact a-posteriori LLRs over the full hypothesis set of the augmented
/// system, with uniform priors. The hypothesis metric is
/// ||y~ - G~ x||^2 - ||x^(2)||^2, and each side is a log-sum-exp.
LlrFrame exhaustive_app_llr(const AugmentedSystem& sys, const DetectionLayout& layout, double noise_variance,
                            double clamp = kDefaultLlrClamp);

} // namespace scma
