#pragma once

#include <span>
#include <vector>

#include "scma/codebook.hpp"

namespace scma {

/// Column layout of the search vector seen by the sphere decoder.
///
/// For constant-modulus codebooks the search vector is x itself (one column per
/// layer). For Omega-decomposable codebooks layers 0..N-1 keep one column each
/// and every later layer is split into m constant-modulus digits, so
/// G' = G * Omega with omega = 1 on the leading block and [2^{m-1}, ..., 1]
/// elsewhere. Only the identity-augmented columns need a constant modulus.
///
/// Every column belongs to one user. The user's highest column is its branching
/// column; all other columns replicate the codeword chosen there.
class DetectionLayout {
public:
    static DetectionLayout direct(const ScmaSystem& sys);
    static DetectionLayout decomposed(const ScmaSystem& sys, const OmegaDecomposition& omega);
    /// Chooses direct or decomposed from the codebook's modulus class. Throws for
    /// general-modulus codebooks.
    static DetectionLayout for_system(const ScmaSystem& sys);

    std::size_t columns() const noexcept { return column_user_.size(); }
    std::size_t resources() const noexcept { return resources_; }
    std::size_t users() const noexcept { return user_columns_.size(); }
    std::size_t points() const noexcept { return points_; }
    std::size_t bits_per_symbol() const noexcept { return bits_; }
    std::size_t depth() const noexcept { return depth_; }

    std::size_t column_user(std::size_t c) const { return column_user_[c]; }
    std::size_t column_layer(std::size_t c) const { return column_layer_[c]; }
    double column_weight(std::size_t c) const { return column_weight_[c]; }
    bool is_branch_column(std::size_t c) const { return branch_column_[column_user_[c]] == c; }
    std::size_t branch_column(std::size_t user) const { return branch_column_[user]; }
    /// Ascending columns owned by a user.
    const std::vector<std::size_t>& user_columns(std::size_t user) const { return user_columns_[user]; }

    /// Symbol carried by column c when its owner sends codeword `codeword`.
    const Complex& symbol(std::size_t c, std::size_t codeword) const { return symbols_[c][codeword]; }

    /// G' (N x columns) from the N x K' effective channel G.
    CMatrix transform(const CMatrix& g) const;
    /// Search vector for one hypothesis (codeword index per user).
    CVector search_vector(std::span<const std::size_t> codewords) const;
    /// The K' layer symbols x for one hypothesis.
    CVector layer_vector(std::span<const std::size_t> codewords) const;

    const ScmaSystem& system() const noexcept { return sys_; }

private:
    DetectionLayout() = default;
    void finish();

    ScmaSystem sys_;
    std::size_t resources_ = 0;
    std::size_t points_ = 0;
    std::size_t bits_ = 0;
    std::size_t depth_ = 1;
    std::vector<std::size_t> column_user_;
    std::vector<std::size_t> column_layer_;
    std::vector<double> column_weight_;
    std::vector<std::vector<Complex>> symbols_; // [column][codeword]
    std::vector<std::size_t> branch_column_;
    std::vector<std::vector<std::size_t>> user_columns_;
};

} // namespace scma
