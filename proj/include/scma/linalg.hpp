#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scma {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Raised for malformed inputs, invalid configurations and unsupported systems.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Small dense row-major complex matrix. The systems handled here are a few
/// dozen entries wide, so no BLAS backing is needed.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const CMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline CVector multiply(const CMatrix& a, const CVector& x)
{
    if (x.size() != a.cols())
        throw Error("matrix-vector dimension mismatch");
    CVector out(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        Complex acc{};
        for (std::size_t c = 0; c < a.cols(); ++c)
            acc += a(r, c) * x[c];
        out[r] = acc;
    }
    return out;
}

/// ||y - A x||^2, summed row by row in ascending column order.
inline double residual_energy(const CMatrix& a, const CVector& y, const CVector& x)
{
    if (y.size() < a.rows() || x.size() != a.cols())
        throw Error("residual dimension mismatch");
    double acc = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        Complex s = y[r];
        for (std::size_t c = 0; c < a.cols(); ++c)
            s -= a(r, c) * x[c];
        acc += std::norm(s);
    }
    return acc;
}

inline double squared_norm(const CVector& x)
{
    double acc = 0.0;
    for (const auto& v : x)
        acc += std::norm(v);
    return acc;
}

} // namespace scma
