#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "scma/channel.hpp"
#include "scma/detection.hpp"
#include "scma/layout.hpp"

namespace scma {

/// Partial assignment while descending the tree from the last column to the first.
struct SearchState {
    static constexpr std::size_t unassigned = std::numeric_limits<std::size_t>::max();

    std::vector<std::size_t> codewords; // per user, `unassigned` until its branching column
    CVector symbols;                    // per search column
    double partial = 0.0;               // d_1^2 accumulated over visited rows

    static SearchState root(const DetectionLayout& layout);
};

struct TreeChild {
    std::size_t codeword = 0;
    double increment = 0.0; // |y~_c - sum_j g~_{c,j} x_j|^2 for the row of this column
};

/// A subtree discarded because its partial metric exceeded the radius.
struct PruneEvent {
    std::size_t column = 0;
    std::vector<std::size_t> codewords; // assignment including the rejected child
    double partial = 0.0;
    double radius = 0.0;
};

struct MsdOptions {
    std::function<void(const PruneEvent&)> on_prune;
};

/// Depth-first sphere search over an augmented upper-triangular system.
///
/// Columns are visited from last to first. A user's branching column offers
/// all M codewords ordered by ascending metric increment; every other column
/// of that user has a single child carrying the chosen codeword. Row c of
/// G~ only couples the columns where it is nonzero, so each increment costs
/// d_f complex products on the first N rows and one squared magnitude below.
/// The radius starts infinite and shrinks to each better leaf.
class ModifiedSphereDecoder {
public:
    /// Throws if G~ is not upper triangular with a nonzero diagonal or its
    /// size does not match the layout.
    ModifiedSphereDecoder(const AugmentedSystem& sys, const DetectionLayout& layout);

    /// Children of `column` given the assignment above it, best first.
    /// Ties keep ascending codeword order.
    std::vector<TreeChild> expand_layer(const SearchState& state, std::size_t column,
                                        OpCounters* counters = nullptr) const;

    /// Nonzero columns of row r.
    const std::vector<std::size_t>& row_support(std::size_t r) const { return support_[r]; }

    const AugmentedSystem& system() const noexcept { return sys_; }
    const DetectionLayout& layout() const noexcept { return layout_; }

private:
    double increment(std::size_t row, const CVector& symbols, OpCounters* counters) const;

    friend class TreeWalker;
    const AugmentedSystem& sys_;
    const DetectionLayout& layout_;
    std::vector<std::vector<std::size_t>> support_;
    std::vector<std::vector<Complex>> coeff_;
};

/// One leaf kept by the list search.
struct ListEntry {
    std::vector<std::size_t> codewords;
    double metric = 0.0;      // ||y~ - G~ x||^2, the search metric
    double head_metric = 0.0; // the same without ||x^(2)||^2, i.e. ||y - G x||^2
};

struct ListMsdResult {
    LlrFrame llr;
    std::vector<ListEntry> list; // ascending (metric, codewords)
    DetectionResult best;
    OpCounters counters;
};

/// Maximum-likelihood detection by modified sphere decoding.
DetectionResult msd_detect(const AugmentedSystem& sys, const DetectionLayout& layout, const MsdOptions& options = {});

/// List search keeping the `list_size` best leaves; LLRs use max* over the
/// list with -||y - G x||^2 / sigma^2 per hypothesis. Throws for list_size 0.
ListMsdResult list_msd(const AugmentedSystem& sys, const DetectionLayout& layout, double noise_variance,
                       std::size_t list_size, double clamp = kDefaultLlrClamp, const MsdOptions& options = {});

/// sum over the first N rows of |y~_r - (G~ x)_r|^2, accumulated like residual_energy.
double head_residual(const AugmentedSystem& sys, const CVector& x);

} // namespace scma
