// Sampling-design diagnostics and optimization: Fourier-block conditioning,
// tight-frame and rigidity tests, the σ_min sandwich for the block Jacobian,
// exact shift optimization among equispaced families, a local E-optimal design
// search, kernel Gram frames, and the Carleson line-density ratio.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "seam.hpp"

namespace weylseam {

namespace detail {
inline constexpr double two_pi = 6.283185307179586476925286766559;

// Reduce x_k·ℓ to the fundamental grid period [0, 2π).
inline double grid_angle(double x, double ell) {
    double t = std::fmod(x * ell, two_pi);
    if (t < 0.0) t += two_pi;
    return t;
}
} // namespace detail

// x_k(α) = 2π(k−1)/(Mℓ) + 2α/ℓ, so that x_kℓ/2 = α + π(k−1)/M.
inline SeamDesign equispaced_design(double alpha, int M, double ell, double eta) {
    require(M >= 1 && std::isfinite(alpha) && ell > 0.0 && std::isfinite(ell),
            ErrorKind::InvalidInput, "equispaced design needs M >= 1 and ell > 0");
    std::vector<double> nodes(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k)
        nodes[static_cast<std::size_t>(k)] =
            detail::two_pi * k / (M * ell) + 2.0 * alpha / ell;
    return SeamDesign(eta, std::move(nodes));
}

// The half-shifted family x_k = 2π(k−½)/(Mℓ) — the α = π/(2M) member.
inline SeamDesign half_shift_design(int M, double ell, double eta) {
    require(M >= 1, ErrorKind::InvalidInput, "half-shift design needs M >= 1");
    return equispaced_design(detail::two_pi / (4.0 * M), M, ell, eta);
}

// Detect membership in the half-shift family modulo node permutation and the
// 2π/ℓ grid period: sorted {x_kℓ mod 2π} must match {π(2k−1)/M} within 1e-12.
inline bool is_half_shift(const SeamDesign& design, double ell) {
    const int M = design.M();
    std::vector<double> theta(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k)
        theta[static_cast<std::size_t>(k)] = detail::grid_angle(design.nodes[static_cast<std::size_t>(k)], ell);
    std::sort(theta.begin(), theta.end());
    for (int k = 0; k < M; ++k) {
        const double target = 0.5 * detail::two_pi * (2 * k + 1) / M;
        if (std::abs(theta[static_cast<std::size_t>(k)] - target) > tol::half_shift_match)
            return false;
    }
    return true;
}

// Fourier block F_{kj} = e^{i x_k jℓ}, k = 1..M rows, j = 0..N−1 columns.
inline CMatrix fourier_block(const SeamDesign& design, int N, double ell) {
    require(N >= 1 && ell > 0.0, ErrorKind::InvalidInput,
            "fourier block needs N >= 1 and ell > 0");
    const int M = design.M();
    CMatrix F(M, N);
    for (int k = 0; k < M; ++k)
        for (int j = 0; j < N; ++j)
            F(k, j) = std::exp(iu * design.nodes[static_cast<std::size_t>(k)] *
                               static_cast<double>(j) * ell);
    return F;
}

// Evaluation matrix at arbitrary complex points: (Ev)_{kj} = e^{i w_k jℓ}.
inline CMatrix evaluation_matrix(const std::vector<cplx>& points, int N, double ell) {
    require(!points.empty() && N >= 1 && ell > 0.0, ErrorKind::InvalidInput,
            "evaluation matrix needs points, N >= 1, ell > 0");
    CMatrix ev(static_cast<int>(points.size()), N);
    for (int k = 0; k < ev.rows(); ++k)
        for (int j = 0; j < N; ++j)
            ev(k, j) = std::exp(iu * points[static_cast<std::size_t>(k)] *
                                static_cast<double>(j) * ell);
    return ev;
}

// ‖F*F − M·I‖_F; zero exactly when the design is a tight frame for the
// N-dimensional Fourier block (every equispaced design with N ≤ M).
inline double tight_frame_defect(const SeamDesign& design, int N, double ell) {
    const CMatrix F = fourier_block(design, N, ell);
    const CMatrix G = F.adjoint() * F;
    const double M = static_cast<double>(design.M());
    double acc = 0.0;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            const cplx expect = (r == c) ? cplx(M, 0.0) : cplx{};
            acc += std::norm(G(r, c) - expect);
        }
    return std::sqrt(acc);
}

// min_k |γ_k| via |sin(a+ib)|² = sin²a + sinh²b with a = x_kℓ/2, b = ηℓ/2.
inline double row_factor_min(const SeamDesign& design, double ell) {
    require(ell > 0.0, ErrorKind::InvalidInput, "row factor needs ell > 0");
    const double b = 0.5 * design.eta * ell;
    const double sh2 = std::sinh(b) * std::sinh(b);
    double best = std::numeric_limits<double>::infinity();
    for (const double x : design.nodes) {
        const double sa = std::sin(0.5 * x * ell);
        best = std::min(best, 2.0 * std::sqrt(sa * sa + sh2));
    }
    return best;
}

// σ_min sandwich for the block Jacobian T on [0, Λ] split into N cells.
struct SandwichReport {
    double smin = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    SeamDesign design;
    double tight_frame_defect = 0.0;
    int N = 0;
    double Lambda = 0.0;
    bool half_shift = false;
};

inline nlohmann::json sandwich_to_json(const SandwichReport& r) {
    return nlohmann::json{{"M", r.design.M()},
                          {"N", r.N},
                          {"eta", r.design.eta},
                          {"Lambda", r.Lambda},
                          {"smin", r.smin},
                          {"lower", r.lower},
                          {"upper", r.upper},
                          {"tight_frame_defect", r.tight_frame_defect},
                          {"half_shift", r.half_shift},
                          {"design", design_to_json(r.design)}};
}

inline SandwichReport smin_bounds_block(const SeamDesign& design, int N, double Lambda) {
    const int M = design.M();
    require(M >= N && N >= 1, ErrorKind::InvalidInput,
            "sandwich bounds need M >= N >= 1");
    require(Lambda > 0.0 && std::isfinite(Lambda), ErrorKind::InvalidInput,
            "sandwich bounds need Lambda > 0");
    const double ell = Lambda / N;
    const double eta = design.eta;
    const double b = 0.5 * eta * ell;
    const double depth = std::exp(-eta * (Lambda - 0.5 * ell));

    SandwichReport rep;
    rep.design = design;
    rep.N = N;
    rep.Lambda = Lambda;
    rep.half_shift = is_half_shift(design, ell);
    rep.tight_frame_defect = tight_frame_defect(design, N, ell);

    const BlockJacobian jac = jacobian_block_free(design, N, Lambda);
    rep.smin = smin_domain(jac.T);
    rep.upper = 2.0 * std::sqrt(static_cast<double>(M)) * std::cosh(b) * depth;
    if (rep.half_shift) {
        const double s = std::sin(detail::two_pi / (4.0 * M));
        rep.lower = 2.0 * std::sqrt(static_cast<double>(M)) *
                    std::sqrt(std::sinh(b) * std::sinh(b) + s * s) * depth;
    } else {
        // Generic product bound σ_min(D_γ)·σ_min(F)·σ_min(D_w); w decreases.
        const double smin_f = smin_domain(jac.factors.F);
        rep.lower = row_factor_min(design, ell) * smin_f * jac.factors.w.back();
    }
    require(rep.lower <= rep.smin + 1e-9, ErrorKind::NumericalError,
            "sandwich lower bound exceeded the measured smin");
    require(rep.smin <= rep.upper + 1e-9, ErrorKind::NumericalError,
            "measured smin exceeded the universal upper bound");
    return rep;
}

// Exact shift optimization among equispaced designs: every maximizer of the
// min row factor is congruent to α = π/(2M) modulo π/M.
struct ShiftOptimum {
    double alpha_star = 0.0;
    double value = 0.0;
    double sweep_alpha = 0.0;
    double sweep_value = 0.0;
};

inline ShiftOptimum optimal_shift(int M, double ell, double eta) {
    require(M >= 2 && ell > 0.0 && eta > 0.0, ErrorKind::InvalidInput,
            "shift optimization needs M >= 2, ell > 0, eta > 0");
    const double pi = 0.5 * detail::two_pi;
    const double b = 0.5 * eta * ell;
    const double sh2 = std::sinh(b) * std::sinh(b);
    auto min_row_factor = [&](double alpha) {
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < M; ++k) {
            const double sa = std::sin(alpha + pi * k / M);
            worst = std::min(worst, 2.0 * std::sqrt(sa * sa + sh2));
        }
        return worst;
    };

    ShiftOptimum out;
    out.alpha_star = pi / (2.0 * M);
    const double s = std::sin(out.alpha_star);
    out.value = 2.0 * std::sqrt(sh2 + s * s);

    // Grid sweep over the fundamental domain [0, π/M); the step π/(M·10⁴)
    // places α* exactly at index 5000.
    const int G = 10000;
    out.sweep_value = -1.0;
    for (int i = 0; i < G; ++i) {
        const double alpha = pi * i / (M * static_cast<double>(G));
        const double v = min_row_factor(alpha);
        if (v > out.sweep_value) {
            out.sweep_value = v;
            out.sweep_alpha = alpha;
        }
    }
    require(out.sweep_value <= out.value + 1e-12, ErrorKind::NumericalError,
            "shift sweep found a larger min row factor than the closed form");
    return out;
}

// Fourier-coefficient control of near-tightness:
//   sup_r |μ̂(r)| ≤ ‖(1/M)F*F − I‖₂ ≤ 2 Σ_r |μ̂(r)|,  θ_k = x_kℓ mod 2π.
struct NearTightnessReport {
    std::vector<cplx> muhat; // r = 1..N−1
    double gram_gap = 0.0;
    double smin_lower = 0.0; // √(M(1−2Σ|μ̂|)) when 2Σ|μ̂| < 1, else 0
};

inline NearTightnessReport near_tightness_report(const SeamDesign& design, int N,
                                                 double ell) {
    const int M = design.M();
    require(M >= N && N >= 1 && ell > 0.0, ErrorKind::InvalidInput,
            "near-tightness report needs M >= N >= 1 and ell > 0");
    NearTightnessReport rep;
    double sum_mu = 0.0, sup_mu = 0.0;
    for (int r = 1; r < N; ++r) {
        cplx acc{};
        for (const double x : design.nodes)
            acc += std::exp(iu * static_cast<double>(r) * detail::grid_angle(x, ell));
        acc /= static_cast<double>(M);
        rep.muhat.push_back(acc);
        sum_mu += std::abs(acc);
        sup_mu = std::max(sup_mu, std::abs(acc));
    }

    const CMatrix F = fourier_block(design, N, ell);
    CMatrix A = F.adjoint() * F;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) A(r, c) = A(r, c) / static_cast<double>(M) -
                                              ((r == c) ? cplx(1.0, 0.0) : cplx{});
    const auto sv = singular_values(A);
    rep.gram_gap = sv.empty() ? 0.0 : sv.front();

    require(sup_mu <= rep.gram_gap + 1e-10, ErrorKind::NumericalError,
            "Fourier coefficient exceeded the Gram gap");
    require(rep.gram_gap <= 2.0 * sum_mu + 1e-10, ErrorKind::NumericalError,
            "Gram gap exceeded twice the Fourier coefficient sum");

    const double eps = 2.0 * sum_mu;
    rep.smin_lower = (eps < 1.0) ? std::sqrt(static_cast<double>(M) * (1.0 - eps)) : 0.0;
    return rep;
}

// Square-case rigidity: σ_min(F_x) = √N iff the node phases are a rotated set
// of Nth roots of unity.
struct RigidityReport {
    bool is_tight = false;
    double phase_fit = 0.0;      // max angular deviation from the fitted rotation
    double max_power_sum = 0.0;  // max_r |Σ_k ζ_k^r|, r = 1..N−1
    double smin = 0.0;           // σ_min(F_x)
};

inline RigidityReport rigidity_check_square(const SeamDesign& design, int N, double ell) {
    require(design.M() == N && N >= 1 && ell > 0.0, ErrorKind::InvalidInput,
            "rigidity check needs a square design (M == N)");
    RigidityReport rep;
    const CMatrix F = fourier_block(design, N, ell);
    rep.smin = smin_domain(F);
    rep.is_tight = rep.smin >= std::sqrt(static_cast<double>(N)) - 1e-8;

    std::vector<double> theta(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k)
        theta[static_cast<std::size_t>(k)] = detail::grid_angle(design.nodes[static_cast<std::size_t>(k)], ell);
    std::sort(theta.begin(), theta.end());
    for (int k = 0; k < N; ++k) {
        const double dev = std::remainder(
            theta[static_cast<std::size_t>(k)] - theta[0] - detail::two_pi * k / N,
            detail::two_pi);
        rep.phase_fit = std::max(rep.phase_fit, std::abs(dev));
    }
    for (int r = 1; r < N; ++r) {
        cplx acc{};
        for (const double t : theta) acc += std::exp(iu * static_cast<double>(r) * t);
        rep.max_power_sum = std::max(rep.max_power_sum, std::abs(acc));
    }

    if (rep.is_tight)
        require(rep.phase_fit <= 1e-8, ErrorKind::NumericalError,
                "tight square design is not a rotated set of roots of unity");
    else if (N >= 2)
        require(rep.max_power_sum > 1e-12, ErrorKind::NumericalError,
                "non-tight square design has vanishing power sums");
    return rep;
}

// Local E-optimal design search: coordinate ascent with golden-section line
// searches, multistart from the half-shift design plus seeded random starts.
struct SearchResult {
    SeamDesign design;
    double smin = 0.0;
};

inline nlohmann::json search_to_json(const SearchResult& r) {
    return nlohmann::json{{"smin", r.smin}, {"design", design_to_json(r.design)}};
}

inline SearchResult design_search_e_optimal(int M, int N, double ell, double eta,
                                            std::uint64_t seed) {
    require(M >= N && N >= 1 && ell > 0.0 && eta > 0.0, ErrorKind::InvalidInput,
            "design search needs M >= N >= 1, ell > 0, eta > 0");
    const double Lambda = N * ell;
    auto objective = [&](const std::vector<double>& nodes) {
        return smin_domain(jacobian_block_free(SeamDesign(eta, nodes), N, Lambda).T);
    };

    auto golden_max = [](auto&& f, double lo, double hi) {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 32; ++it) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = f(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = f(x1);
            }
        }
        return (f1 >= f2) ? std::pair<double, double>{x1, f1}
                          : std::pair<double, double>{x2, f2};
    };

    std::vector<std::vector<double>> starts;
    starts.push_back(half_shift_design(M, ell, eta).nodes);
    SplitMix64 rng(seed);
    const double period = detail::two_pi / ell;
    for (int s = 0; s < 4; ++s) {
        std::vector<double> nodes(static_cast<std::size_t>(M));
        for (auto& x : nodes) x = rng.uniform(0.0, period);
        starts.push_back(std::move(nodes));
    }

    std::vector<double> best_nodes = starts.front();
    double best_val = objective(best_nodes);
    const double window = 0.5 * detail::two_pi / (M * ell);
    for (const auto& start : starts) {
        std::vector<double> cur = start;
        double cur_val = objective(cur);
        for (int sweep = 0; sweep < 3; ++sweep)
            for (int k = 0; k < M; ++k) {
                auto line = [&](double x) {
                    std::vector<double> cand = cur;
                    cand[static_cast<std::size_t>(k)] = x;
                    return objective(cand);
                };
                const double center = cur[static_cast<std::size_t>(k)];
                const auto [x_best, f_best] =
                    golden_max(line, center - window, center + window);
                if (f_best > cur_val) {
                    cur[static_cast<std::size_t>(k)] = x_best;
                    cur_val = f_best;
                }
            }
        if (cur_val > best_val) {
            best_val = cur_val;
            best_nodes = cur;
        }
    }

    const double upper = 2.0 * std::sqrt(static_cast<double>(M)) *
                         std::cosh(0.5 * eta * ell) *
                         std::exp(-eta * (Lambda - 0.5 * ell));
    require(best_val <= upper + 1e-9, ErrorKind::NumericalError,
            "design search exceeded the universal upper bound");
    return SearchResult{SeamDesign(eta, std::move(best_nodes)), best_val};
}

// Reproducing-kernel Gram matrix A_{jk} = K_N(w_j, w_k) with
// K_N(z, w) = Σ_{m=0}^{N−1} e^{izmℓ} e^{−i·conj(w)·mℓ}; A = Ev·Ev*.
inline CMatrix kernel_gram(const std::vector<cplx>& points, int N, double ell) {
    require(!points.empty() && N >= 1 && ell > 0.0, ErrorKind::InvalidInput,
            "kernel gram needs points, N >= 1, ell > 0");
    const int M = static_cast<int>(points.size());
    CMatrix A(M, M);
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k) {
            cplx acc{};
            for (int m = 0; m < N; ++m)
                acc += std::exp(iu * points[static_cast<std::size_t>(j)] *
                                static_cast<double>(m) * ell) *
                       std::exp(-iu * std::conj(points[static_cast<std::size_t>(k)]) *
                                static_cast<double>(m) * ell);
            A(j, k) = acc;
        }
    return A;
}

// sup over intervals |I| ≥ η of #(X ∩ I)/|I| for a finite sorted node set;
// the sup is attained on consecutive runs with length clamped below by η.
inline double carleson_line_density(const std::vector<double>& xs, double eta) {
    require(std::isfinite(eta) && eta > 0.0, ErrorKind::InvalidInput,
            "line density needs eta > 0");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(std::isfinite(xs[i]), ErrorKind::InvalidInput,
                "line density needs finite nodes");
        if (i + 1 < xs.size())
            require(xs[i] <= xs[i + 1], ErrorKind::InvalidInput,
                    "line density needs sorted nodes");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i; j < xs.size(); ++j) {
            const double len = std::max(eta, xs[j] - xs[i]);
            best = std::max(best, static_cast<double>(j - i + 1) / len);
        }
    return best;
}

} // namespace weylseam
