// Independent numerical oracles for the test suite.
//
// Nothing in here shares an algorithm with the library: eigenvalues come from
// a two-sided Jacobi iteration (the library uses one-sided on the columns),
// the matrix exponential from scaling-and-squaring Taylor (the library uses
// the traceless closed form), transfer matrices from adaptive RK4
// time-stepping (the library multiplies closed-form factors), and transforms
// from a radix-2 FFT. Agreement between the two sides is evidence, not
// tautology.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "weylseam/hamiltonian.hpp"
#include "weylseam/matrix.hpp"

namespace oracles {

using weylseam::cplx;
using weylseam::CMatrix;
using weylseam::Mat2;

// Eigenvalues of a Hermitian matrix, ascending, by two-sided complex Jacobi.
inline std::vector<double> eig_hermitian(CMatrix A) {
    const int n = A.rows();
    if (n != A.cols()) throw std::runtime_error("eig_hermitian: not square");
    const double total = A.frobenius();
    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * std::norm(A(p, q));
        if (std::sqrt(off) <= 1e-14 * std::max(total, 1e-300)) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = A(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double app = A(p, p).real(), aqq = A(q, q).real();
                const double absapq = std::abs(apq);
                const cplx phase = apq / absapq;
                const double tau = (aqq - app) / (2.0 * absapq);
                const double t = (tau >= 0.0 ? -1.0 : 1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- Rᴴ A R with R the (p,q) complex Givens rotation.
                for (int i = 0; i < n; ++i) {
                    const cplx aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip + s * std::conj(phase) * aiq;
                    A(i, q) = -s * phase * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const cplx api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api + s * phase * aqi;
                    A(q, i) = -s * std::conj(phase) * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = A(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

// exp(A) for a general 2×2 complex matrix by scaling-and-squaring with a
// 30-term Taylor series.
inline Mat2 expm_taylor(const Mat2& A) {
    int k = 0;
    double norm = A.frobenius();
    while (norm > 0.5 && k < 60) {
        norm *= 0.5;
        ++k;
    }
    const double scale = std::ldexp(1.0, -k);
    const Mat2 B = cplx(scale, 0.0) * A;
    Mat2 term = Mat2::identity();
    Mat2 sum = Mat2::identity();
    for (int j = 1; j <= 30; ++j) {
        term = cplx(1.0 / j, 0.0) * (term * B);
        sum = sum + term;
    }
    for (int i = 0; i < k; ++i) sum = sum * sum;
    return sum;
}

// Transfer matrix by adaptive classical RK4 on Φ′ = −zJH(s)Φ, refined until
// two consecutive resolutions agree to the requested tolerance. H is
// evaluated by cell, and steps never straddle a cell boundary, so the
// integrand is smooth on every step.
template <weylseam::PiecewiseHamiltonian H>
Mat2 transfer_rk4(const H& h, double t, double s, cplx z, double tolerance = 1e-10) {
    const Mat2 J = Mat2::symplectic_unit();
    const double ell = h.ell();
    const int n = h.cell_count();

    auto integrate = [&](int steps_per_unit) {
        Mat2 phi = Mat2::identity();
        const int j_first = std::min(n - 1, std::max(0, static_cast<int>(std::floor(t / ell))));
        const int j_last = std::min(n - 1, std::max(0, static_cast<int>(std::ceil(s / ell)) - 1));
        for (int j = j_first; j <= j_last; ++j) {
            const double a = std::max(t, j * ell);
            const double b = std::min(s, (j + 1) * ell);
            if (b <= a) continue;
            const Mat2 G = (-z) * (J * weylseam::cell_matrix(h, j)); // constant generator
            const int steps =
                std::max(4, static_cast<int>(std::ceil((b - a) * steps_per_unit)));
            const double dt = (b - a) / steps;
            for (int i = 0; i < steps; ++i) {
                const Mat2 k1 = G * phi;
                const Mat2 k2 = G * (phi + cplx(0.5 * dt, 0.0) * k1);
                const Mat2 k3 = G * (phi + cplx(0.5 * dt, 0.0) * k2);
                const Mat2 k4 = G * (phi + cplx(dt, 0.0) * k3);
                phi = phi + cplx(dt / 6.0, 0.0) * (k1 + cplx(2.0, 0.0) * k2 +
                                                   cplx(2.0, 0.0) * k3 + k4);
            }
        }
        return phi;
    };

    int resolution = 64;
    Mat2 coarse = integrate(resolution);
    for (int round = 0; round < 8; ++round) {
        resolution *= 2;
        const Mat2 fine = integrate(resolution);
        if ((fine - coarse).frobenius() <= tolerance * std::max(1.0, fine.frobenius()))
            return fine;
        coarse = fine;
    }
    return coarse;
}

// In-place radix-2 FFT (size must be a power of two); inverse applies 1/n.
inline void fft(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::runtime_error("fft: size not a power of 2");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.14159265358979323846;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// Central difference d/dt f(t0) with step h.
inline cplx central_diff(const std::function<cplx(double)>& f, double t0, double h) {
    return (f(t0 + h) - f(t0 - h)) / (2.0 * h);
}

// Log-log slope of y against x between consecutive samples; returns the
// average slope, which is what scaling checks pin down.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2 || x.size() != y.size())
        throw std::runtime_error("loglog_slope: need matched samples");
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        acc += std::log(y[i] / y[i - 1]) / std::log(x[i] / x[i - 1]);
    return acc / static_cast<double>(x.size() - 1);
}

} // namespace oracles
