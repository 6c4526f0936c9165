// First- and second-order perturbation machinery for the Weyl and Schur
// coefficients: the rank-one pairing for Dm, its two-kernel form, the
// free-point Fourier–Laplace derivative, Duhamel first variations, explicit
// quadratic-remainder constants, and the robust depth kernels K⁽¹⁾, K⁽²⁾.
#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hamiltonian.hpp"
#include "matrix.hpp"
#include "quadrature.hpp"
#include "tolerances.hpp"
#include "transfer.hpp"

namespace weylseam {

// A traceless perturbation direction ΔH(s) = X(q(s)), piecewise constant on
// the same partition as the base Hamiltonian.
struct TracelessDirection {
    std::vector<cplx> q;

    int cell_count() const { return static_cast<int>(q.size()); }
};

// L¹ norm of the matrix direction: ‖X(q)‖_op = |q| per cell, times length.
inline double direction_l1(const TracelessDirection& dir, double ell) {
    double acc = 0.0;
    for (const auto& v : dir.q) acc += std::abs(v);
    return acc * ell;
}

inline double direction_linf(const TracelessDirection& dir) {
    double m = 0.0;
    for (const auto& v : dir.q) m = std::max(m, std::abs(v));
    return m;
}

namespace detail {

template <PiecewiseHamiltonian H>
void check_same_partition(const H& h, const TracelessDirection& dir) {
    require(dir.cell_count() == h.cell_count(), ErrorKind::InvalidInput,
            "direction must live on the base Hamiltonian's partition");
}

} // namespace detail

// --- Weyl solution and the rank-one pairing --------------------------------

// Y(s) = Φ(s,0;z)·(1, m(z))ᵀ, the solution of JY′ = zHY normalized at 0.
template <PiecewiseHamiltonian H>
std::vector<Vec2> weyl_solution(const H& h, cplx z, const std::vector<double>& grid) {
    const cplx m = weyl_m(h, z);
    std::vector<Vec2> out;
    out.reserve(grid.size());
    for (const double s : grid) {
        const Mat2 phi = transfer(h, 0.0, s, z).value;
        out.push_back(phi * Vec2{1.0, m});
    }
    return out;
}

// Dm[ΔH] = z ∫₀^Λ Yᵀ ΔH Y ds, evaluated per cell with Gauss–Legendre order 8
// on the exact per-cell Y (the integrand is entire, so GL8 is spectrally
// accurate at the cell scale).
template <PiecewiseHamiltonian H>
cplx dm_pairing(const H& h, cplx z, const TracelessDirection& dir) {
    detail::check_same_partition(h, dir);
    const cplx m = weyl_m(h, z);
    const double ell = h.ell();
    const Mat2 J = Mat2::symplectic_unit();
    const QuadratureRule& rule = gl8();

    Vec2 y_start{1.0, m}; // Y at the left edge of the current cell
    cplx acc{};
    std::vector<double> nodes, weights;
    for (int j = 0; j < h.cell_count(); ++j) {
        const double a = j * ell, b = a + ell;
        map_rule(rule, a, b, nodes, weights);
        const Mat2 gen = (-z) * (J * cell_matrix(h, j));
        const cplx qj = dir.q[static_cast<std::size_t>(j)];
        if (qj != cplx{}) {
            const double hq = qj.real(), kq = qj.imag();
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                const Mat2 step = expm_traceless2(cplx(nodes[i] - a, 0.0) * gen);
                const Vec2 y = step * y_start;
                // Yᵀ X(q) Y = h(Y₁² − Y₂²) + 2k Y₁Y₂
                const cplx quad = hq * (y.x * y.x - y.y * y.y) + 2.0 * kq * y.x * y.y;
                acc += weights[i] * quad;
            }
        }
        y_start = expm_traceless2(cplx(ell, 0.0) * gen) * y_start;
    }
    return z * acc;
}

// u± coordinates of the Weyl solution: Y = a·u₊ + b·u₋ with u± = (1, ±i)ᵀ,
// inverted as a = (Y₁ − iY₂)/2, b = (Y₁ + iY₂)/2.
template <PiecewiseHamiltonian H>
std::pair<std::vector<cplx>, std::vector<cplx>> two_kernel_coeffs(
    const H& h, cplx z, const std::vector<double>& grid) {
    const std::vector<Vec2> ys = weyl_solution(h, z, grid);
    std::vector<cplx> a, b;
    a.reserve(ys.size());
    b.reserve(ys.size());
    for (const Vec2& y : ys) {
        a.push_back(0.5 * (y.x - iu * y.y));
        b.push_back(0.5 * (y.x + iu * y.y));
    }
    return {std::move(a), std::move(b)};
}

// --- Free-point Fourier–Laplace derivative ---------------------------------

// L_z(q) = −iz ∫₀^Λ q(s) e^{izs} ds for a piecewise-constant direction,
// integrated in closed form per cell: ∫_cell e^{izs} ds = ℓ·e^{iz·mid}·sinc(zℓ/2).
inline cplx dv_free(const TracelessDirection& dir, double Lambda, cplx z) {
    require(z.imag() > 0.0, ErrorKind::OutOfDomain, "dv_free needs Im z > 0");
    require(dir.cell_count() >= 1 && Lambda > 0.0, ErrorKind::InvalidInput,
            "dv_free needs a nonempty direction on a positive interval");
    const double ell = Lambda / dir.cell_count();
    cplx acc{};
    for (int j = 0; j < dir.cell_count(); ++j) {
        const cplx qj = dir.q[static_cast<std::size_t>(j)];
        if (qj == cplx{}) continue;
        const double mid = (j + 0.5) * ell;
        acc += qj * ell * std::exp(iu * z * mid) * sinc_c(0.5 * z * ell);
    }
    return -iu * z * acc;
}

// --- Duhamel first variation ------------------------------------------------

// δΦ(Λ,0;z)[ΔH] = −z ∫₀^Λ Φ(Λ,s) J ΔH(s) Φ(s,0) ds, per-cell GL8 with exact
// prefix/suffix propagators.
template <PiecewiseHamiltonian H>
CMatrix duhamel_first(const H& h, cplx z, const TracelessDirection& dir) {
    detail::check_same_partition(h, dir);
    const int n = h.cell_count();
    const double ell = h.ell();
    const Mat2 J = Mat2::symplectic_unit();
    const QuadratureRule& rule = gl8();

    // suffix[j] = Φ(Λ, b_j), prefix accumulated on the fly as Φ(a_j, 0).
    std::vector<Mat2> cell_factor(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        cell_factor[static_cast<std::size_t>(j)] =
            expm_traceless2((-z * ell) * (J * cell_matrix(h, j)));
    std::vector<Mat2> suffix(static_cast<std::size_t>(n));
    suffix[static_cast<std::size_t>(n - 1)] = Mat2::identity();
    for (int j = n - 1; j > 0; --j)
        suffix[static_cast<std::size_t>(j - 1)] =
            suffix[static_cast<std::size_t>(j)] * cell_factor[static_cast<std::size_t>(j)];

    Mat2 prefix = Mat2::identity();
    Mat2 acc = Mat2::zero();
    std::vector<double> nodes, weights;
    for (int j = 0; j < n; ++j) {
        const double a = j * ell, b = a + ell;
        const cplx qj = dir.q[static_cast<std::size_t>(j)];
        if (qj != cplx{}) {
            const Mat2 gen = (-z) * (J * cell_matrix(h, j));
            const Mat2 jx = J * traceless_part(qj);
            map_rule(rule, a, b, nodes, weights);
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                const Mat2 left = suffix[static_cast<std::size_t>(j)] *
                                  expm_traceless2(cplx(b - nodes[i], 0.0) * gen);
                const Mat2 right = expm_traceless2(cplx(nodes[i] - a, 0.0) * gen) * prefix;
                acc = acc + cplx(weights[i], 0.0) * (left * (jx * right));
            }
        }
        prefix = cell_factor[static_cast<std::size_t>(j)] * prefix;
    }
    return CMatrix::from_mat2((-z) * acc);
}

// --- Explicit quadratic-remainder constants ---------------------------------

struct RemainderBudget {
    cplx z{};
    double Lambda = 0.0;
    double C1 = 0.0;  // |z|Λe^{2|z|Λ}: first-order Duhamel bound
    double C2 = 0.0;  // 2|z|²Λ²e^{3|z|Λ}: second-order Duhamel bound
    double r_m = 0.0; // e^{−2|z|Λ}e^{(Im z)Λ/2}/(8|z|): admissible L¹ radius
    double C = 0.0;   // 64|z|²e^{6|z|Λ}e^{−(Im z)Λ/2}: quadratic-remainder constant
};

inline RemainderBudget remainder_budget(cplx z, double Lambda) {
    require(z.imag() > 0.0 && Lambda > 0.0, ErrorKind::OutOfDomain,
            "remainder_budget needs Im z > 0 and Lambda > 0");
    const double az = std::abs(z);
    require(az >= tol::budget_min_abs_z, ErrorKind::InvalidInput,
            "remainder_budget requires |z| >= 1e-8 (r_m blows up as |z| -> 0)");
    RemainderBudget b;
    b.z = z;
    b.Lambda = Lambda;
    b.C1 = az * Lambda * std::exp(2.0 * az * Lambda);
    b.C2 = 2.0 * az * az * Lambda * Lambda * std::exp(3.0 * az * Lambda);
    b.r_m = std::exp(-2.0 * az * Lambda) * std::exp(0.5 * z.imag() * Lambda) / (8.0 * az);
    b.C = 64.0 * az * az * std::exp(6.0 * az * Lambda) * std::exp(-0.5 * z.imag() * Lambda);
    return b;
}

// --- Robust depth kernels ----------------------------------------------------

// Rotated frame: P = (u₊ u₋) = [[1, 1], [i, −i]], Φ̃ = P⁻¹ΦP. In this frame
// the free propagator is diagonal and X(q) maps to a purely off-diagonal
// matrix, which is what makes the kernels below well-behaved near H₀.
inline Mat2 frame_p() { return {1.0, 1.0, iu, -iu}; }
inline Mat2 frame_p_inv() { return {0.5, -0.5 * iu, 0.5, 0.5 * iu}; }
inline Mat2 to_tilde(const Mat2& m) { return frame_p_inv() * m * frame_p(); }

struct RobustKernels {
    std::vector<cplx> K1, K2; // sampled on the query grid
    cplx v{};                 // Schur value Φ̃₂₁(Λ,0)/Φ̃₂₂(Λ,0)
};

// K⁽¹⁾(s) = Φ̃₂₂(Λ,s)(Φ̃₁₁(s,0) − vΦ̃₁₂(s,0))/Φ̃₂₂(Λ,0)
// K⁽²⁾(s) = −Φ̃₂₁(Λ,s)(Φ̃₂₁(s,0) − vΦ̃₂₂(s,0))/Φ̃₂₂(Λ,0)
// so that Dv[q] = −iz ∫ (q K⁽¹⁾ + q̄ K⁽²⁾) ds along traceless directions.
template <PiecewiseHamiltonian H>
RobustKernels robust_kernels(const H& h, cplx z, const std::vector<double>& grid) {
    const double Lambda = h.total_length();
    const Mat2 full = to_tilde(transfer(h, 0.0, Lambda, z).value);
    const cplx den = full(1, 1);
    require(std::abs(den) >= tol::tilde_denominator, ErrorKind::DenominatorCollapse,
            "rotated-frame denominator collapsed");
    RobustKernels out;
    out.v = full(1, 0) / den;
    out.K1.reserve(grid.size());
    out.K2.reserve(grid.size());
    for (const double s : grid) {
        const Mat2 lower = to_tilde(transfer(h, 0.0, s, z).value);
        const Mat2 upper = to_tilde(transfer(h, s, Lambda, z).value);
        out.K1.push_back(upper(1, 1) * (lower(0, 0) - out.v * lower(0, 1)) / den);
        out.K2.push_back(-upper(1, 0) * (lower(1, 0) - out.v * lower(1, 1)) / den);
    }
    return out;
}

} // namespace weylseam
