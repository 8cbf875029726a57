#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "scma/linalg.hpp"

namespace scma {

/// Dimensions of an SCMA system. All indices elsewhere in the library are
/// zero-based; user k owns layers [k*dims, (k+1)*dims).
struct SystemConfig {
    std::size_t users = 0;               // K
    std::size_t resources = 0;           // N
    std::size_t dims = 0;                // d_v, resources per user
    std::size_t points = 0;              // M
    std::size_t layers = 0;              // K' = d_v * K
    std::size_t layers_per_resource = 0; // d_f

    /// Validates N < K, d_v < N, M a power of two, d_f * N == K'.
    static SystemConfig make(std::size_t users, std::size_t resources, std::size_t dims,
                             std::size_t points);

    std::size_t bits_per_symbol() const noexcept; // L_M = log2 M

    bool operator==(const SystemConfig&) const = default;
};

/// Binary N x K' layer-to-resource map S with its derived layer sets F_n.
class MappingMatrix {
public:
    MappingMatrix() = default;
    /// `entries` holds N rows of K' zero/one values. Throws if a column does
    /// not carry exactly one nonzero entry or if the rows are irregular.
    MappingMatrix(std::size_t users, std::size_t dims, std::vector<std::vector<std::uint8_t>> entries);

    std::size_t resources() const noexcept { return entries_.size(); }
    std::size_t users() const noexcept { return users_; }
    std::size_t dims() const noexcept { return dims_; }
    std::size_t layers() const noexcept { return users_ * dims_; }
    std::size_t layers_per_resource() const noexcept { return layer_sets_.empty() ? 0 : layer_sets_[0].size(); }

    bool entry(std::size_t resource, std::size_t layer) const { return entries_[resource][layer] != 0; }
    std::size_t resource_of_layer(std::size_t layer) const { return layer_resource_[layer]; }
    /// F_n: ascending layer indices occupying resource n.
    const std::vector<std::size_t>& layer_set(std::size_t resource) const { return layer_sets_[resource]; }
    /// Resources touched by user k, in layer order.
    std::vector<std::size_t> resources_of_user(std::size_t user) const;

    /// N x K indicator P with p_k = diag(S_k S_k^T).
    std::vector<std::vector<std::uint8_t>> indicator() const;

    /// True when the first N columns form the identity, which makes the
    /// augmented channel upper triangular.
    bool has_identity_prefix() const;

    const std::vector<std::vector<std::uint8_t>>& entries() const noexcept { return entries_; }

    bool operator==(const MappingMatrix& o) const { return entries_ == o.entries_ && users_ == o.users_ && dims_ == o.dims_; }

private:
    std::size_t users_ = 0;
    std::size_t dims_ = 0;
    std::vector<std::vector<std::uint8_t>> entries_;
    std::vector<std::size_t> layer_resource_;
    std::vector<std::vector<std::size_t>> layer_sets_;
};

enum class ModulusClass { constant, omega_decomposable, general };

const char* to_string(ModulusClass c) noexcept;

/// Per-user M-point constellations in C^{d_v}. Codeword index c is the
/// integer value of its bit label with c_{k,1} as the most significant bit.
class Codebook {
public:
    Codebook() = default;
    /// points[k][c] is the d_v-dimensional codeword of user k labelled c.
    Codebook(std::size_t dims, std::vector<std::vector<CVector>> points);

    std::size_t users() const noexcept { return points_.size(); }
    std::size_t size() const noexcept { return points_.empty() ? 0 : points_[0].size(); }
    std::size_t dims() const noexcept { return dims_; }
    std::size_t bits_per_symbol() const noexcept;

    const CVector& point(std::size_t user, std::size_t codeword) const { return points_[user][codeword]; }
    ModulusClass modulus_class() const noexcept { return class_; }

    /// Mean codeword energy E||x_k||^2 averaged over users.
    double average_energy() const;

    /// X_k(c_k). `bits` must hold exactly L_M values in {0,1}.
    const CVector& map_bits(std::span<const std::uint8_t> bits, std::size_t user) const;
    /// Inverse of map_bits by nearest codeword; exact for points taken from the codebook.
    std::size_t codeword_of(std::size_t user, const CVector& x) const;
    /// Bit m (zero-based, MSB first) of codeword c.
    std::uint8_t bit(std::size_t codeword, std::size_t m) const noexcept
    {
        return static_cast<std::uint8_t>((codeword >> (bits_per_symbol() - 1 - m)) & 1u);
    }

    bool operator==(const Codebook& o) const { return dims_ == o.dims_ && points_ == o.points_; }

private:
    std::size_t dims_ = 0;
    std::vector<std::vector<CVector>> points_;
    ModulusClass class_ = ModulusClass::general;
};

/// A complete system: dimensions, layer map and codebooks.
struct ScmaSystem {
    SystemConfig config;
    MappingMatrix mapping;
    Codebook codebook;
};

/// Weighted decomposition x = Omega x' onto a constant-modulus base alphabet.
struct OmegaDecomposition {
    std::size_t depth = 1;                  // m, with M = 4^m
    std::vector<double> weights;            // [2^{m-1}, ..., 1]
    std::vector<std::vector<Complex>> base; // base alphabet per layer (4 points)
    /// components[k][c][l*m + j]: digit j (weight weights[j]) of dimension l of codeword c.
    std::vector<std::vector<std::vector<Complex>>> components;

    /// K' x m*K' block-diagonal weight matrix.
    CMatrix omega(std::size_t layers) const;
    /// Sum_j weights[j] * components: reproduces the codeword.
    CVector reconstruct(std::size_t user, std::size_t codeword) const;
};

/// Matches every constellation value to a weighted sum of constant-modulus base
/// points. Throws Error("general modulus; MSD optimality not guaranteed") if no
/// exact decomposition exists.
OmegaDecomposition omega_decompose(const Codebook& cb);

/// User and resource relabeling that puts N/d_v mutually orthogonal users first.
struct Relabeling {
    std::vector<std::size_t> user_order;     // new user index -> original user index
    std::vector<std::size_t> resource_order; // new resource index -> original resource index

    bool is_identity() const;
};

struct RelabelResult {
    Relabeling relabeling;
    MappingMatrix mapping;
};

/// Finds a relabeling whose mapping matrix has the identity in its first N
/// columns. Prefers choices that leave resources in place, then the
/// lexicographically smallest user subset. Throws when no N/d_v orthogonal
/// users exist (layer-level relabeling is not supported).
RelabelResult relabel_upper_triangular(const MappingMatrix& s);

/// Applies a relabeling to mapping and codebook alike.
ScmaSystem apply_relabeling(const ScmaSystem& sys, const Relabeling& r);

/// Codebook text format; see README for the grammar.
ScmaSystem parse_codebook(std::istream& in);
ScmaSystem load_codebook(const std::string& path);
void write_codebook(std::ostream& out, const ScmaSystem& sys);

/// Built-in 6-user, 4-resource systems with d_v = 2.
ScmaSystem builtin_qam4();
ScmaSystem builtin_qam16();
/// Resolves "builtin:qam4", "builtin:qam16" or a file path.
ScmaSystem resolve_codebook(const std::string& spec);

} // namespace scma
