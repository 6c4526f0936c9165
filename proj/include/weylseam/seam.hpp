// The seam map S(θ) = (v_{H(θ)}(x_k + iη))_k and its Jacobians: the exact
// complex M×N Jacobian at the free base (node factors × Fourier frame × depth
// weights), the general-basis Jacobian from Fourier–Laplace transforms of
// features, and real-linear finite-difference Jacobians at arbitrary bases.
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "hamiltonian.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "transfer.hpp"

namespace weylseam {

// Seam sampling design: nodes z_k = x_k + iη on a horizontal line.
// Nodes may repeat or be unsorted; degenerate designs are diagnosed (not
// rejected) by the design module.
struct SeamDesign {
    double eta = 0.0;
    std::vector<double> nodes;

    SeamDesign() = default;
    SeamDesign(double eta_, std::vector<double> nodes_)
        : eta(eta_), nodes(std::move(nodes_)) {
        require(std::isfinite(eta) && eta > 0.0, ErrorKind::InvalidInput,
                "design height eta must be positive");
        require(!nodes.empty(), ErrorKind::InvalidInput, "design needs at least one node");
        for (const double x : nodes)
            require(std::isfinite(x), ErrorKind::InvalidInput, "design node must be finite");
    }

    int M() const { return static_cast<int>(nodes.size()); }
    cplx z(int k) const { return {nodes[static_cast<std::size_t>(k)], eta}; }
};

inline nlohmann::json design_to_json(const SeamDesign& d) {
    return {{"eta", d.eta}, {"nodes", d.nodes}};
}

inline SeamDesign design_from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("eta") && j.contains("nodes"), ErrorKind::InvalidInput,
            "design JSON needs fields eta and nodes");
    return SeamDesign(j.at("eta").get<double>(), j.at("nodes").get<std::vector<double>>());
}

// --- The seam map -----------------------------------------------------------

// H(θ): the base with q_j replaced by q_j + θ_j. The new margin is the
// tightest of the base margin and the remaining distance to the |q| = ½ wall.
inline BlockHamiltonian perturbed_hamiltonian(const BlockHamiltonian& base,
                                              const std::vector<cplx>& theta) {
    require(static_cast<int>(theta.size()) == base.cell_count(), ErrorKind::InvalidInput,
            "theta length must match the base block count");
    std::vector<cplx> q = base.params();
    double worst = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        q[j] += theta[j];
        worst = std::max(worst, std::abs(q[j]));
    }
    require(worst < 0.5, ErrorKind::InvalidPerturbation,
            "perturbation leaves the positivity margin (|q_j + theta_j| >= 1/2)");
    const double margin = std::min(0.5 - worst, base.epsilon());
    return BlockHamiltonian(base.cell_count(), base.total_length(), std::move(q), margin);
}

inline std::vector<cplx> seam_map(const BlockHamiltonian& base, const std::vector<cplx>& theta,
                                  const SeamDesign& design) {
    const BlockHamiltonian h = perturbed_hamiltonian(base, theta);
    std::vector<cplx> out;
    out.reserve(design.nodes.size());
    for (int k = 0; k < design.M(); ++k) out.push_back(schur_v(h, design.z(k)));
    return out;
}

// --- Exact block Jacobian at the free base ----------------------------------

// T_{kj} = γ_k e^{ix_k jℓ} w_j with γ_k = −2i sin((x_k+iη)ℓ/2)e^{ix_kℓ/2} and
// w_j = e^{−η(j+½)ℓ}: node factor × Fourier frame × depth weight.
struct JacobianFactors {
    std::vector<cplx> gamma;  // M node factors
    CMatrix F;                // M×N Fourier frame, entries e^{ix_k jℓ}
    std::vector<double> w;    // N depth weights
};

struct BlockJacobian {
    CMatrix T; // M×N, equals diag(gamma) · F · diag(w)
    JacobianFactors factors;
};

inline BlockJacobian jacobian_block_free(const SeamDesign& design, int N, double Lambda) {
    require(N >= 1 && Lambda > 0.0, ErrorKind::InvalidInput,
            "jacobian_block_free needs N >= 1 and Lambda > 0");
    const int M = design.M();
    const double ell = Lambda / N;
    const double eta = design.eta;

    BlockJacobian out;
    out.factors.gamma.resize(static_cast<std::size_t>(M));
    out.factors.w.resize(static_cast<std::size_t>(N));
    out.factors.F = CMatrix(M, N);
    out.T = CMatrix(M, N);

    for (int j = 0; j < N; ++j)
        out.factors.w[static_cast<std::size_t>(j)] = std::exp(-eta * (j + 0.5) * ell);
    for (int k = 0; k < M; ++k) {
        const double xk = design.nodes[static_cast<std::size_t>(k)];
        const cplx zk = design.z(k);
        out.factors.gamma[static_cast<std::size_t>(k)] =
            -2.0 * iu * std::sin(0.5 * zk * ell) * std::exp(iu * xk * ell * 0.5);
        for (int j = 0; j < N; ++j) {
            const cplx fkj = std::exp(iu * xk * static_cast<double>(j) * ell);
            out.factors.F(k, j) = fkj;
            out.T(k, j) = out.factors.gamma[static_cast<std::size_t>(k)] * fkj *
                          out.factors.w[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

// --- General feature bases ---------------------------------------------------

// A feature φ on the cell partition of [0, Λ]: per-cell constant, or per-cell
// linear interpolating (left, right) edge values.
struct Feature {
    double Lambda = 0.0;
    bool linear = false;
    std::vector<double> left;  // constant value, or value at the left cell edge
    std::vector<double> right; // value at the right cell edge (linear only)

    int cell_count() const { return static_cast<int>(left.size()); }
    double ell() const { return Lambda / static_cast<double>(left.size()); }

    double value_at_left_edge() const { return left.front(); }
    double value_at_right_edge() const { return linear ? right.back() : left.back(); }
};

inline Feature constant_feature(int cells, double Lambda, double value) {
    Feature f;
    f.Lambda = Lambda;
    f.left.assign(static_cast<std::size_t>(cells), value);
    return f;
}

inline Feature indicator_feature(int cells, double Lambda, int cell_index) {
    Feature f;
    f.Lambda = Lambda;
    f.left.assign(static_cast<std::size_t>(cells), 0.0);
    f.left[static_cast<std::size_t>(cell_index)] = 1.0;
    return f;
}

// Piecewise-linear hat: 0→1 over cell `rise`, 1→0 over cell `rise`+1.
inline Feature hat_feature(int cells, double Lambda, int rise) {
    require(rise >= 0 && rise + 1 < cells, ErrorKind::InvalidInput,
            "hat feature needs two cells to rise and fall in");
    Feature f;
    f.Lambda = Lambda;
    f.linear = true;
    f.left.assign(static_cast<std::size_t>(cells), 0.0);
    f.right.assign(static_cast<std::size_t>(cells), 0.0);
    f.right[static_cast<std::size_t>(rise)] = 1.0;
    f.left[static_cast<std::size_t>(rise + 1)] = 1.0;
    return f;
}

struct FeatureBasis {
    std::vector<Feature> features;
    bool smooth = false; // absolutely continuous with integrable derivative

    int N() const { return static_cast<int>(features.size()); }
};

// (sin w − w·cos w)/w², stable at w → 0 via the odd series w/3 − w³/30 + w⁵/840.
inline cplx sin_minus_wcos_over_w2(cplx w) {
    if (std::abs(w) < 1e-3) {
        const cplx w2 = w * w;
        return w * (1.0 / 3.0 - w2 / 30.0 + w2 * w2 / 840.0);
    }
    return (std::sin(w) - w * std::cos(w)) / (w * w);
}

// φ̂(z) = ∫₀^Λ φ(s)e^{izs} ds by exact per-cell antiderivatives. Each cell
// contributes around its midpoint: constants give ℓ·e^{iz·mid}·sinc(zℓ/2)
// (the series-safe form of (e^{izb}−e^{iza})/(iz)); the linear part adds one
// integration by parts, 2i·d²·(sin w − w cos w)/w² at w = zd, d = ℓ/2. Both
// forms are analytic in z, so |z| → 0 needs no special casing beyond the
// series branches.
inline cplx feature_hat(const Feature& phi, cplx z) {
    const int n = phi.cell_count();
    require(n >= 1 && phi.Lambda > 0.0, ErrorKind::InvalidInput, "feature has no cells");
    require(!phi.linear || phi.right.size() == phi.left.size(), ErrorKind::InvalidInput,
            "linear feature needs matching edge arrays");
    const double ell = phi.ell();
    const double d = 0.5 * ell;
    cplx acc{};
    for (int j = 0; j < n; ++j) {
        const double mid = (j + 0.5) * ell;
        const cplx phase = std::exp(iu * z * mid);
        if (phi.linear) {
            const double lv = phi.left[static_cast<std::size_t>(j)];
            const double rv = phi.right[static_cast<std::size_t>(j)];
            const double mid_val = 0.5 * (lv + rv);
            const double slope = (rv - lv) / ell;
            acc += phase * (mid_val * ell * sinc_c(z * d) +
                            slope * 2.0 * iu * d * d * sin_minus_wcos_over_w2(z * d));
        } else {
            acc += phi.left[static_cast<std::size_t>(j)] * ell * phase * sinc_c(z * d);
        }
    }
    return acc;
}

// T = diag(−iz_k) · Φ̂ with Φ̂_{kj} = φ̂_j(z_k).
inline CMatrix jacobian_general_free(const FeatureBasis& basis, const SeamDesign& design) {
    require(basis.N() >= 1, ErrorKind::InvalidInput, "feature basis is empty");
    const int M = design.M(), N = basis.N();
    CMatrix T(M, N);
    for (int k = 0; k < M; ++k) {
        const cplx zk = design.z(k);
        for (int j = 0; j < N; ++j)
            T(k, j) = -iu * zk * feature_hat(basis.features[static_cast<std::size_t>(j)], zk);
    }
    return T;
}

// ‖φ′‖₁ measured as the total variation of φ: in-cell variation plus jumps
// at cell seams, so BV features (indicators) are covered alongside W^{1,1}.
inline double feature_deriv_l1(const Feature& phi) {
    const int n = phi.cell_count();
    double acc = 0.0;
    double prev_right = 0.0;
    bool have_prev = false;
    for (int j = 0; j < n; ++j) {
        const double lv = phi.left[static_cast<std::size_t>(j)];
        const double rv = phi.linear ? phi.right[static_cast<std::size_t>(j)] : lv;
        if (have_prev) acc += std::abs(lv - prev_right); // jump at the seam between cells
        acc += std::abs(rv - lv);                        // in-cell variation
        prev_right = rv;
        have_prev = true;
    }
    return acc;
}

// Integration-by-parts bound |zφ̂(z)| ≤ |φ(Λ)|e^{−ηΛ} + |φ(0)| + ‖φ′‖₁ on the
// line Im z = η.
inline double ibp_bound(const Feature& phi, double eta) {
    return std::abs(phi.value_at_right_edge()) * std::exp(-eta * phi.Lambda) +
           std::abs(phi.value_at_left_edge()) + feature_deriv_l1(phi);
}

// --- Real-linear finite-difference Jacobians ---------------------------------
//
// Fixed realification layout: row 2k = Re S_k, row 2k+1 = Im S_k;
// column 2j = ∂/∂h_j, column 2j+1 = ∂/∂k_j (θ_j = h_j + i·k_j).

inline std::vector<cplx> complexify(const std::vector<double>& theta2n) {
    require(theta2n.size() % 2 == 0, ErrorKind::InvalidInput,
            "real coordinate vector must have even length");
    std::vector<cplx> out(theta2n.size() / 2);
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = cplx(theta2n[2 * j], theta2n[2 * j + 1]);
    return out;
}

// Central differences of the seam map in the 2N real coordinates.
inline CMatrix jacobian_fd(const BlockHamiltonian& base, const std::vector<double>& theta0,
                           const SeamDesign& design, double step) {
    require(step > 0.0, ErrorKind::InvalidInput, "finite-difference step must be positive");
    const int N = base.cell_count();
    require(static_cast<int>(theta0.size()) == 2 * N, ErrorKind::InvalidInput,
            "theta0 must have 2N real coordinates");
    const int M = design.M();
    CMatrix out(2 * M, 2 * N);
    std::vector<double> probe = theta0;
    for (int c = 0; c < 2 * N; ++c) {
        probe[static_cast<std::size_t>(c)] = theta0[static_cast<std::size_t>(c)] + step;
        const std::vector<cplx> plus = seam_map(base, complexify(probe), design);
        probe[static_cast<std::size_t>(c)] = theta0[static_cast<std::size_t>(c)] - step;
        const std::vector<cplx> minus = seam_map(base, complexify(probe), design);
        probe[static_cast<std::size_t>(c)] = theta0[static_cast<std::size_t>(c)];
        for (int k = 0; k < M; ++k) {
            const cplx d = (plus[static_cast<std::size_t>(k)] -
                            minus[static_cast<std::size_t>(k)]) /
                           (2.0 * step);
            out(2 * k, c) = d.real();
            out(2 * k + 1, c) = d.imag();
        }
    }
    return out;
}

// Realification of a complex-linear map in the same layout.
inline CMatrix realify(const CMatrix& T) {
    const int M = T.rows(), N = T.cols();
    CMatrix out(2 * M, 2 * N);
    for (int k = 0; k < M; ++k)
        for (int j = 0; j < N; ++j) {
            const cplx t = T(k, j);
            out(2 * k, 2 * j) = t.real();
            out(2 * k + 1, 2 * j) = t.imag();
            out(2 * k, 2 * j + 1) = -t.imag();
            out(2 * k + 1, 2 * j + 1) = t.real();
        }
    return out;
}

// Per-column complex-linearity defect ‖∂S/∂k_j − i·∂S/∂h_j‖₂ of a realified
// FD Jacobian; identically ~0 exactly when the map is complex-linear.
inline std::vector<double> complex_linearity_defect(const CMatrix& fd) {
    require(fd.rows() % 2 == 0 && fd.cols() % 2 == 0, ErrorKind::InvalidInput,
            "realified Jacobian must have even dimensions");
    const int M = fd.rows() / 2, N = fd.cols() / 2;
    std::vector<double> defect(static_cast<std::size_t>(N), 0.0);
    for (int j = 0; j < N; ++j) {
        double acc = 0.0;
        for (int k = 0; k < M; ++k) {
            const cplx dh(fd(2 * k, 2 * j).real(), fd(2 * k + 1, 2 * j).real());
            const cplx dk(fd(2 * k, 2 * j + 1).real(), fd(2 * k + 1, 2 * j + 1).real());
            acc += std::norm(dk - iu * dh);
        }
        defect[static_cast<std::size_t>(j)] = std::sqrt(acc);
    }
    return defect;
}

} // namespace weylseam
