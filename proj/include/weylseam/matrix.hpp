// Small dense complex matrices.
//
// Two shapes cover everything the library needs:
//   Mat2    — fixed 2×2, used for transfer matrices and Hamiltonian blocks
//             (value type, lives on the stack, cheap to multiply in chains);
//   CMatrix — dynamic row-major matrix for Jacobians, frames and Gram
//             matrices (at most a few hundred rows anywhere in the artifact).
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace weylseam {

using cplx = std::complex<double>;

inline constexpr cplx iu{0.0, 1.0}; // imaginary unit

// ---------------------------------------------------------------------------
// Mat2: fixed 2×2 complex matrix, row-major {a00, a01, a10, a11}.
// ---------------------------------------------------------------------------
struct Mat2 {
    std::array<cplx, 4> e{};

    Mat2() = default;
    Mat2(cplx a00, cplx a01, cplx a10, cplx a11) : e{a00, a01, a10, a11} {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    // J = [[0,−1],[1,0]], the standard symplectic unit.
    static Mat2 symplectic_unit() { return {0.0, -1.0, 1.0, 0.0}; }

    cplx& operator()(int r, int c) { return e[static_cast<std::size_t>(2 * r + c)]; }
    const cplx& operator()(int r, int c) const { return e[static_cast<std::size_t>(2 * r + c)]; }

    cplx det() const { return e[0] * e[3] - e[1] * e[2]; }
    cplx trace() const { return e[0] + e[3]; }

    Mat2 transpose() const { return {e[0], e[2], e[1], e[3]}; }
    Mat2 adjoint() const {
        return {std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])};
    }

    double frobenius() const {
        double s = 0.0;
        for (const auto& x : e) s += std::norm(x);
        return std::sqrt(s);
    }

    bool finite() const {
        for (const auto& x : e)
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
        return true;
    }

    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]};
    }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
                a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
    }
    friend Mat2 operator*(cplx s, const Mat2& a) {
        return {s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]};
    }
};

// 2-vector helpers used with Mat2.
struct Vec2 {
    cplx x{}, y{};
};

inline Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a.e[0] * v.x + a.e[1] * v.y, a.e[2] * v.x + a.e[3] * v.y};
}

// Largest singular value of a 2×2 matrix from the closed form
// σ² = (f ± sqrt(f² − 4d²))/2 with f = ‖A‖_F², d = |det A|.
inline double sigma_max2(const Mat2& a) {
    const double f = a.frobenius() * a.frobenius();
    const double d = std::abs(a.det());
    const double disc = std::max(0.0, f * f - 4.0 * d * d);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

inline double sigma_min2(const Mat2& a) {
    const double f = a.frobenius() * a.frobenius();
    const double d = std::abs(a.det());
    const double disc = std::max(0.0, f * f - 4.0 * d * d);
    return std::sqrt(std::max(0.0, 0.5 * (f - std::sqrt(disc))));
}

// ---------------------------------------------------------------------------
// CMatrix: dynamic complex matrix, row-major storage.
// ---------------------------------------------------------------------------
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols) {
        require(rows >= 0 && cols >= 0, ErrorKind::InvalidInput, "negative matrix dimension");
    }

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix from_mat2(const Mat2& a) {
        CMatrix m(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m(r, c) = a(r, c);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    cplx& operator()(int r, int c) { return entries_[idx(r, c)]; }
    const cplx& operator()(int r, int c) const { return entries_[idx(r, c)]; }

    const std::vector<cplx>& data() const { return entries_; }

    CMatrix adjoint() const {
        CMatrix m(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    CMatrix transpose() const {
        CMatrix m(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const auto& x : entries_) s += std::norm(x);
        return std::sqrt(s);
    }

    bool finite() const {
        for (const auto& x : entries_)
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
        return true;
    }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        require(a.cols_ == b.rows_, ErrorKind::InvalidInput, "matmul dimension mismatch");
        CMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend CMatrix operator-(const CMatrix& a, const CMatrix& b) {
        require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::InvalidInput,
                "matrix subtraction dimension mismatch");
        CMatrix c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i)
            c.entries_[i] = a.entries_[i] - b.entries_[i];
        return c;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        require(static_cast<int>(v.size()) == cols_, ErrorKind::InvalidInput,
                "matrix-vector dimension mismatch");
        std::vector<cplx> out(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) {
            cplx s{};
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = s;
        }
        return out;
    }

private:
    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(c);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> entries_;
};

// Euclidean norm of a complex vector.
inline double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace weylseam
