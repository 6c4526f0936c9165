// Transfer matrices of the canonical system JY′ = zHY and the Weyl/Schur
// coefficients read off their endpoint entries.
//
// H is piecewise constant, so Φ(s,t;z) is an exact product of per-cell
// closed-form factors exp(−z·Δs·J·H_cell); there is no time-discretization
// error anywhere downstream. A 4th-order integrator exists only in the test
// suite as an independent oracle.
#pragma once

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "hamiltonian.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "tolerances.hpp"

namespace weylseam {

namespace detail {

// Machine-epsilon scale factor for the structural guards below: determinant
// and symplecticity residuals of a computed product grow like ε·‖Φ‖², so for
// large spans the fixed tolerances must relax with the result's size. Within
// the calibrated regime (‖Φ‖ of order one) the strict constants apply.
inline double roundoff_scale(const Mat2& value) {
    const double fro = value.frobenius();
    return std::max(1.0, fro * fro);
}

} // namespace detail

struct TransferMatrix {
    Mat2 value;
    double t = 0.0, s = 0.0; // span: Φ(s, t; z) with t ≤ s
    cplx z{};

    double det_error() const { return std::abs(value.det() - 1.0); }

    double symplectic_error() const {
        const Mat2 J = Mat2::symplectic_unit();
        return (value.transpose() * J * value - J).frobenius();
    }

    // ‖Φ‖_op − e^{|z|(s−t)} (positive means the propagator bound is exceeded).
    double norm_excess() const {
        return sigma_max2(value) - std::exp(std::abs(z) * (s - t));
    }
};

// Φ(s, t; z) for t ≤ s, split exactly at cell boundaries.
template <PiecewiseHamiltonian H>
TransferMatrix transfer(const H& h, double t, double s, cplx z) {
    const double Lambda = h.total_length();
    require(std::isfinite(t) && std::isfinite(s), ErrorKind::InvalidInput,
            "transfer span must be finite");
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::InvalidInput,
            "transfer energy must be finite");
    require(0.0 <= t && t <= s && s <= Lambda, ErrorKind::OutOfDomain,
            "transfer span must satisfy 0 <= t <= s <= Lambda");

    const int n = h.cell_count();
    const double ell = h.ell();
    const Mat2 J = Mat2::symplectic_unit();

    Mat2 phi = Mat2::identity();
    const int j_first = std::min(n - 1, std::max(0, static_cast<int>(std::floor(t / ell))));
    const int j_last = std::min(n - 1, std::max(0, static_cast<int>(std::ceil(s / ell)) - 1));
    for (int j = j_first; j <= j_last; ++j) {
        const double a = std::max(t, j * ell);
        const double b = std::min(s, (j + 1) * ell);
        if (b <= a) continue;
        const Mat2 gen = (-z * (b - a)) * (J * cell_matrix(h, j));
        phi = expm_traceless2(gen) * phi;
    }

    TransferMatrix out{phi, t, s, z};
    // Structural guards: catastrophic violations indicate a bug, never a
    // legitimate evaluation, so they throw rather than warn.
    const double scale = detail::roundoff_scale(phi);
    require(out.det_error() <= tol::transfer_det_one * scale, ErrorKind::NumericalError,
            "transfer matrix lost det = 1");
    require(out.symplectic_error() <= tol::transfer_symplectic * scale,
            ErrorKind::NumericalError, "transfer matrix lost J-symplecticity");
    require(out.norm_excess() <= tol::transfer_norm_slack * scale, ErrorKind::NumericalError,
            "transfer matrix exceeded the propagator bound");
    return out;
}

// Endpoint entries Φ(Λ, 0; z) = [[A, B], [C, D]].
struct EndpointEntries {
    cplx A{}, B{}, C{}, D{};
};

template <PiecewiseHamiltonian H>
EndpointEntries endpoint_entries(const H& h, cplx z) {
    const Mat2 phi = transfer(h, 0.0, h.total_length(), z).value;
    return {phi(0, 0), phi(0, 1), phi(1, 0), phi(1, 1)};
}

// Weyl coefficient m(z) = (iA − C)/(D − iB) for Im z > 0. The denominator is
// provably nonvanishing; a collapse below the e^{(Im z)Λ/2} scale signals
// numerical breakdown, not an actual zero.
template <PiecewiseHamiltonian H>
cplx weyl_m(const H& h, cplx z) {
    require(z.imag() > 0.0, ErrorKind::OutOfDomain, "weyl_m needs Im z > 0");
    const EndpointEntries e = endpoint_entries(h, z);
    const cplx num = iu * e.A - e.C;
    const cplx den = e.D - iu * e.B;
    const double floor_scale = std::exp(0.5 * z.imag() * h.total_length());
    require(std::abs(den) >= tol::weyl_denominator_rel * floor_scale,
            ErrorKind::DenominatorCollapse, "Weyl denominator D - iB collapsed");
    return num / den;
}

// Schur function v = (m − i)/(m + i); |v| < 1 on the upper half-plane,
// identically 0 at the free Hamiltonian.
template <PiecewiseHamiltonian H>
cplx schur_v(const H& h, cplx z) {
    const cplx m = weyl_m(h, z);
    return (m - iu) / (m + iu);
}

// Inverse Cayley transform m = i(1 + v)/(1 − v).
inline cplx inverse_cayley(cplx v) {
    require(std::abs(1.0 - v) >= tol::near_pole, ErrorKind::NearPole,
            "inverse Cayley transform evaluated too close to v = 1");
    return iu * (1.0 + v) / (1.0 - v);
}

// Meromorphic continuation of m to all of ℂ: the endpoint entries are entire
// in z, so m extends with poles exactly at the zeros of D − iB. Poles are
// detected only up to floating point, relative to the numerator scale.
struct MeromorphicValue {
    cplx value{}; // meaningful only when pole == false
    bool pole = false;
};

template <PiecewiseHamiltonian H>
MeromorphicValue continue_meromorphic(const H& h, cplx z) {
    const EndpointEntries e = endpoint_entries(h, z);
    const cplx num = iu * e.A - e.C;
    const cplx den = e.D - iu * e.B;
    if (std::abs(den) < tol::pole_flag_rel * std::max(std::abs(num), 1.0))
        return {cplx{}, true};
    return {num / den, false};
}

} // namespace weylseam
