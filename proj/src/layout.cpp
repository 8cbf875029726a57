#include "scma/layout.hpp"

#include <algorithm>
#include <cmath>

namespace scma {

DetectionLayout DetectionLayout::direct(const ScmaSystem& sys)
{
    if (!sys.mapping.has_identity_prefix())
        throw Error("mapping matrix is not upper triangular; relabel users and resources first");
    const auto& cfg = sys.config;
    DetectionLayout out;
    out.sys_ = sys;
    out.resources_ = cfg.resources;
    out.points_ = cfg.points;
    out.bits_ = cfg.bits_per_symbol();
    out.depth_ = 1;
    for (std::size_t layer = 0; layer < cfg.layers; ++layer) {
        const std::size_t user = layer / cfg.dims;
        const std::size_t l = layer % cfg.dims;
        out.column_user_.push_back(user);
        out.column_layer_.push_back(layer);
        out.column_weight_.push_back(1.0);
        std::vector<Complex> sym;
        for (std::size_t c = 0; c < cfg.points; ++c)
            sym.push_back(sys.codebook.point(user, c)[l]);
        out.symbols_.push_back(std::move(sym));
    }
    out.finish();

    // The dropped ||x^(2)||^2 term must not depend on the hypothesis.
    for (std::size_t k = 0; k < cfg.users; ++k) {
        double first = -1.0;
        for (std::size_t c = 0; c < cfg.points; ++c) {
            double tail = 0.0;
            for (auto col : out.user_columns_[k])
                if (col >= cfg.resources)
                    tail += std::norm(out.symbols_[col][c]);
            if (first < 0.0)
                first = tail;
            else if (std::abs(tail - first) > 1e-9 * std::max(1.0, first))
                throw Error("augmentation offset ||x^(2)||^2 varies over the codebook; MSD optimality not guaranteed");
        }
    }
    return out;
}

DetectionLayout DetectionLayout::decomposed(const ScmaSystem& sys, const OmegaDecomposition& omega)
{
    if (!sys.mapping.has_identity_prefix())
        throw Error("mapping matrix is not upper triangular; relabel users and resources first");
    const auto& cfg = sys.config;
    const std::size_t m = omega.depth;
    DetectionLayout out;
    out.sys_ = sys;
    out.resources_ = cfg.resources;
    out.points_ = cfg.points;
    out.bits_ = cfg.bits_per_symbol();
    out.depth_ = m;

    // Layers of the leading block stay whole: their symbols never enter the
    // dropped ||x^(2)||^2 term, and keeping them whole lets their owners branch
    // below the identity rows where pruning is possible.
    for (std::size_t layer = 0; layer < cfg.resources; ++layer) {
        const std::size_t user = layer / cfg.dims;
        const std::size_t l = layer % cfg.dims;
        out.column_user_.push_back(user);
        out.column_layer_.push_back(layer);
        out.column_weight_.push_back(1.0);
        std::vector<Complex> sym;
        for (std::size_t c = 0; c < cfg.points; ++c)
            sym.push_back(sys.codebook.point(user, c)[l]);
        out.symbols_.push_back(std::move(sym));
    }
    for (std::size_t layer = cfg.resources; layer < cfg.layers; ++layer) {
        const std::size_t user = layer / cfg.dims;
        const std::size_t l = layer % cfg.dims;
        for (std::size_t digit = 0; digit < m; ++digit) {
            out.column_user_.push_back(user);
            out.column_layer_.push_back(layer);
            out.column_weight_.push_back(omega.weights[digit]);
            std::vector<Complex> sym;
            for (std::size_t c = 0; c < cfg.points; ++c)
                sym.push_back(omega.components[user][c][l * m + digit]);
            out.symbols_.push_back(std::move(sym));
        }
    }
    out.finish();
    return out;
}

DetectionLayout DetectionLayout::for_system(const ScmaSystem& sys)
{
    switch (sys.codebook.modulus_class()) {
    case ModulusClass::constant:
        return direct(sys);
    case ModulusClass::omega_decomposable:
        return decomposed(sys, omega_decompose(sys.codebook));
    case ModulusClass::general:
        break;
    }
    throw Error("general modulus; MSD optimality not guaranteed");
}

void DetectionLayout::finish()
{
    const std::size_t users = sys_.config.users;
    user_columns_.assign(users, {});
    branch_column_.assign(users, 0);
    for (std::size_t c = 0; c < column_user_.size(); ++c) {
        user_columns_[column_user_[c]].push_back(c);
        branch_column_[column_user_[c]] = c;
    }
}

CMatrix DetectionLayout::transform(const CMatrix& g) const
{
    if (g.rows() != resources_ || g.cols() != sys_.config.layers)
        throw Error("effective channel has wrong dimensions");
    CMatrix out(g.rows(), columns());
    for (std::size_t n = 0; n < g.rows(); ++n)
        for (std::size_t c = 0; c < columns(); ++c)
            out(n, c) = column_weight_[c] * g(n, column_layer_[c]);
    return out;
}

CVector DetectionLayout::search_vector(std::span<const std::size_t> codewords) const
{
    CVector x(columns());
    for (std::size_t c = 0; c < columns(); ++c)
        x[c] = symbols_[c][codewords[column_user_[c]]];
    return x;
}

CVector DetectionLayout::layer_vector(std::span<const std::size_t> codewords) const
{
    const auto& cfg = sys_.config;
    CVector x(cfg.layers);
    for (std::size_t k = 0; k < cfg.users; ++k)
        for (std::size_t l = 0; l < cfg.dims; ++l)
            x[k * cfg.dims + l] = sys_.codebook.point(k, codewords[k])[l];
    return x;
}

} // namespace scma
