// Dense complex kernels: singular values (one-sided Jacobi), LU solves, and
// the closed-form exponential of a traceless 2×2 matrix.
//
// Everything here works on matrices with at most a few hundred rows, so the
// O(n³) classics are the right tools; there is deliberately no sparse or
// iterative machinery.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "tolerances.hpp"

namespace weylseam {

struct SVDResult {
    std::vector<double> s; // descending, size min(rows, cols)
    CMatrix U;             // rows × k, orthonormal columns (k = min(rows, cols))
    CMatrix V;             // cols × k; A ≈ U diag(s) Vᴴ
};

namespace detail {

// One-sided Jacobi on a tall matrix (rows ≥ cols): rotate column pairs until
// all mutual inner products are negligible, then read σ_j = ‖column j‖.
// Rotations are exact unitaries, so singular values converge to full
// precision; quadratic convergence makes the sweep cap unreachable in
// practice.
inline SVDResult jacobi_svd_tall(CMatrix B) {
    const int m = B.rows(), n = B.cols();
    CMatrix V = CMatrix::identity(n);

    for (int sweep = 0; sweep < tol::jacobi_max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                cplx apq{};
                for (int i = 0; i < m; ++i) {
                    app += std::norm(B(i, p));
                    aqq += std::norm(B(i, q));
                    apq += std::conj(B(i, p)) * B(i, q);
                }
                const double scale = std::sqrt(app * aqq);
                if (scale == 0.0 || std::abs(apq) <= tol::jacobi_offdiag * scale) continue;

                // Diagonalize the 2×2 Hermitian Gram block [[app, apq],[apq*, aqq]]:
                // the annihilating tangent solves t² − 2τt − 1 = 0; take the
                // smaller root for a rotation angle ≤ π/4.
                const double absapq = std::abs(apq);
                const cplx phase = apq / absapq; // e^{iφ}
                const double tau = (aqq - app) / (2.0 * absapq);
                const double t = (tau >= 0.0 ? -1.0 : 1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int i = 0; i < m; ++i) {
                    const cplx bp = B(i, p), bq = B(i, q);
                    B(i, p) = c * bp + s * std::conj(phase) * bq;
                    B(i, q) = -s * phase * bp + c * bq;
                }
                for (int i = 0; i < n; ++i) {
                    const cplx vp = V(i, p), vq = V(i, q);
                    V(i, p) = c * vp + s * std::conj(phase) * vq;
                    V(i, q) = -s * phase * vp + c * vq;
                }
                rotated = true;
            }
        }
        if (!rotated) {
            SVDResult out;
            out.s.resize(static_cast<std::size_t>(n));
            std::vector<int> order(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), 0);
            for (int j = 0; j < n; ++j) {
                double nr = 0.0;
                for (int i = 0; i < m; ++i) nr += std::norm(B(i, j));
                out.s[static_cast<std::size_t>(j)] = std::sqrt(nr);
            }
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return out.s[static_cast<std::size_t>(a)] > out.s[static_cast<std::size_t>(b)];
            });
            std::vector<double> sorted(static_cast<std::size_t>(n));
            CMatrix U(m, n), Vs(n, n);
            for (int j = 0; j < n; ++j) {
                const int src = order[static_cast<std::size_t>(j)];
                const double sigma = out.s[static_cast<std::size_t>(src)];
                sorted[static_cast<std::size_t>(j)] = sigma;
                const double inv = sigma > 0.0 ? 1.0 / sigma : 0.0;
                for (int i = 0; i < m; ++i) U(i, j) = B(i, src) * inv;
                for (int i = 0; i < n; ++i) Vs(i, j) = V(i, src);
            }
            out.s = std::move(sorted);
            out.U = std::move(U);
            out.V = std::move(Vs);
            return out;
        }
    }
    fail(ErrorKind::NumericalError, "one-sided Jacobi SVD did not converge");
}

} // namespace detail

inline SVDResult svd(const CMatrix& A) {
    require(!A.empty(), ErrorKind::InvalidInput, "SVD of an empty matrix");
    require(A.finite(), ErrorKind::InvalidInput, "SVD input has non-finite entries");
    if (A.rows() >= A.cols()) return detail::jacobi_svd_tall(A);
    // Wide matrix: factor the adjoint and swap the roles of U and V.
    SVDResult t = detail::jacobi_svd_tall(A.adjoint());
    SVDResult out;
    out.s = std::move(t.s);
    out.U = std::move(t.V);
    out.V = std::move(t.U);
    return out;
}

inline std::vector<double> singular_values(const CMatrix& A) { return svd(A).s; }

// σ_min with the domain-dimension convention: the operator A: ℂ^cols → ℂ^rows
// has σ_min = min_{‖x‖=1} ‖Ax‖, which is the smallest singular value when
// cols ≤ rows and exactly 0 when cols > rows (nontrivial kernel).
inline double smin_domain(const CMatrix& A) {
    if (A.cols() > A.rows()) return 0.0;
    return singular_values(A).back();
}

// LU with partial pivoting. Pivot collapse relative to ‖A‖_F signals a
// numerically singular system.
inline std::vector<cplx> solve_square(const CMatrix& A, const std::vector<cplx>& b) {
    const int n = A.rows();
    require(n == A.cols(), ErrorKind::InvalidInput, "solve_square needs a square matrix");
    require(static_cast<int>(b.size()) == n, ErrorKind::InvalidInput,
            "right-hand side dimension mismatch");
    require(A.finite(), ErrorKind::InvalidInput, "solve input has non-finite entries");

    const double cutoff = tol::lu_pivot_rel * A.frobenius();
    CMatrix lu = A;
    std::vector<cplx> x = b;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::abs(lu(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        require(best > 0.0 && best >= cutoff, ErrorKind::SingularMatrix,
                "pivot collapse in LU factorization");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const cplx f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
            x[static_cast<std::size_t>(i)] -= f * x[static_cast<std::size_t>(k)];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        cplx s = x[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / lu(i, i);
    }
    return x;
}

// sin(μ)/μ, stable at μ → 0 via the even series 1 − μ²/6 + μ⁴/120.
inline cplx sinc_c(cplx mu) {
    if (std::abs(mu) < tol::expm_series_cut) {
        const cplx mu2 = mu * mu;
        return 1.0 - mu2 / 6.0 + mu2 * mu2 / 120.0;
    }
    return std::sin(mu) / mu;
}

// exp(A) for traceless 2×2 A. Cayley–Hamilton gives A² = −(det A)·I, so with
// μ² = det A (principal branch) the series collapses to cos(μ)I + sinc(μ)A.
// Both cos and sinc are even, so the square-root branch is immaterial.
inline Mat2 expm_traceless2(const Mat2& A) {
    require(A.finite(), ErrorKind::InvalidInput, "expm input has non-finite entries");
    const double opnorm = sigma_max2(A);
    require(std::abs(A.trace()) <= tol::expm_trace_rel * std::max(opnorm, 1e-300),
            ErrorKind::InvalidInput, "expm_traceless2 requires a traceless matrix") ;
    if (opnorm == 0.0) return Mat2::identity();

    const cplx mu = std::sqrt(A.det());
    const cplx c = std::cos(mu);
    const cplx s = sinc_c(mu);
    Mat2 R(c + s * A.e[0], s * A.e[1], s * A.e[2], c + s * A.e[3]);

    // det(exp A) = e^{tr A} = 1 in exact arithmetic; allow roundoff to grow
    // with the square of the result's size (entries ~ e^{‖A‖} for large A).
    const double fro = R.frobenius();
    require(std::abs(R.det() - 1.0) <= tol::expm_det_one * std::max(1.0, fro * fro),
            ErrorKind::NumericalError, "expm_traceless2 lost det = 1");
    return R;
}

// Spec'd dynamic-matrix entry point; the Mat2 overload is the workhorse.
inline CMatrix expm_traceless2(const CMatrix& A) {
    require(A.rows() == 2 && A.cols() == 2, ErrorKind::InvalidInput,
            "expm_traceless2 needs a 2×2 matrix");
    Mat2 a(A(0, 0), A(0, 1), A(1, 0), A(1, 1));
    return CMatrix::from_mat2(expm_traceless2(a));
}

} // namespace weylseam
