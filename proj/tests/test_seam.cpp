#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "weylseam/rng.hpp"
#include "weylseam/seam.hpp"
#include "weylseam/variation.hpp"

using namespace weylseam;

namespace {

const double pi = 3.14159265358979323846;

BlockHamiltonian free_base(int n, double Lambda, double eps = 0.05) {
    return BlockHamiltonian(n, Lambda, std::vector<cplx>(static_cast<std::size_t>(n), cplx{}),
                            eps);
}

SeamDesign half_shift_design(int M, double eta, double ell) {
    std::vector<double> nodes(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k)
        nodes[static_cast<std::size_t>(k)] = 2.0 * pi * (k + 0.5) / (M * ell);
    return SeamDesign(eta, std::move(nodes));
}

std::vector<cplx> random_theta(SplitMix64& rng, int n, double scale) {
    std::vector<cplx> t(static_cast<std::size_t>(n));
    for (auto& v : t) v = rng.complex_disk(scale);
    return t;
}

double max_abs_entry(const CMatrix& a) {
    double m = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c)));
    return m;
}

} // namespace

TEST_CASE("seam design: validation and JSON round trip", "[seam]") {
    CHECK_THROWS_AS(SeamDesign(0.0, {1.0}), Error);
    CHECK_THROWS_AS(SeamDesign(1.0, {}), Error);
    const SeamDesign d(0.5, {0.0, 1.5, -2.0});
    CHECK(d.M() == 3);
    CHECK(d.z(1) == cplx(1.5, 0.5));
    const SeamDesign back = design_from_json(design_to_json(d));
    CHECK(back.eta == d.eta);
    CHECK(back.nodes == d.nodes);
    CHECK_THROWS_AS(design_from_json(nlohmann::json{{"eta", 1.0}}), Error);
}

TEST_CASE("seam map: free zero, definition, margin, contractivity", "[seam]") {
    const int N = 6;
    const double Lambda = 3.0;
    const BlockHamiltonian base = free_base(N, Lambda);
    const SeamDesign design(0.7, {-1.0, 0.4, 2.2});

    const auto at_zero = seam_map(base, std::vector<cplx>(N, cplx{}), design);
    for (const auto& v : at_zero) CHECK(std::abs(v) < 1e-13);

    SplitMix64 rng(311);
    std::vector<cplx> q = random_theta(rng, N, 0.3);
    const BlockHamiltonian nonfree(N, Lambda, q, 0.05);
    const SeamDesign single(0.7, {1.1});
    const auto one = seam_map(nonfree, std::vector<cplx>(N, cplx{}), single);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == schur_v(nonfree, cplx(1.1, 0.7)));

    const auto vals = seam_map(base, random_theta(rng, N, 0.4), design);
    for (const auto& v : vals) CHECK(std::abs(v) < 1.0);

    std::vector<cplx> escape(N, cplx{});
    escape[2] = cplx(0.51, 0.0);
    try {
        seam_map(base, escape, design);
        FAIL("expected InvalidPerturbation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidPerturbation);
    }
    CHECK_THROWS_AS(seam_map(base, std::vector<cplx>(N + 1, cplx{}), design), Error);
}

TEST_CASE("seam map linearization error decays superlinearly", "[seam]") {
    const int N = 4;
    const double Lambda = 2.0;
    const BlockHamiltonian base = free_base(N, Lambda);
    const SeamDesign design = half_shift_design(4, 0.5, Lambda / N);
    const BlockJacobian jac = jacobian_block_free(design, N, Lambda);

    SplitMix64 rng(313);
    const std::vector<cplx> dir = random_theta(rng, N, 1.0);
    std::vector<double> amps{0.04, 0.02, 0.01};
    std::vector<double> errs;
    for (const double t : amps) {
        std::vector<cplx> theta(dir);
        for (auto& v : theta) v *= t;
        const auto s = seam_map(base, theta, design);
        const auto lin = jac.T.apply(theta);
        double err = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) err = std::max(err, std::abs(s[k] - lin[k]));
        errs.push_back(err);
    }
    // At least quadratic; the measured exponent is 3 at the free base because
    // S is odd along rays there (see the variation suite).
    CHECK(oracles::loglog_slope(amps, errs) >= 1.9);
}

TEST_CASE("block Jacobian: closed-form entry, factorization, column decay", "[seam]") {
    // N = M = 1, x = 0: T₁₁ = 2 sinh(ηℓ/2) e^{−ηℓ/2}.
    const double eta = 0.8, Lambda = 1.3;
    const SeamDesign single(eta, {0.0});
    const BlockJacobian j1 = jacobian_block_free(single, 1, Lambda);
    const double expected = 2.0 * std::sinh(0.5 * eta * Lambda) * std::exp(-0.5 * eta * Lambda);
    CHECK(std::abs(j1.T(0, 0) - expected) < 1e-14);

    // Sign/value against a finite difference of the seam map itself.
    const BlockHamiltonian base1 = free_base(1, Lambda);
    const double h = 1e-6;
    const cplx fd = (seam_map(base1, {cplx(h, 0.0)}, single)[0] -
                     seam_map(base1, {cplx(-h, 0.0)}, single)[0]) /
                    (2.0 * h);
    CHECK(std::abs(fd - j1.T(0, 0)) < 1e-9);

    // Assembled T coincides with diag(γ)·F·diag(w) entrywise.
    const SeamDesign design(0.5, {0.3, -1.7, 2.9, 0.0});
    const int N = 6;
    const BlockJacobian jac = jacobian_block_free(design, N, 2.4);
    for (int k = 0; k < design.M(); ++k)
        for (int j = 0; j < N; ++j) {
            const cplx prod = jac.factors.gamma[static_cast<std::size_t>(k)] *
                              jac.factors.F(k, j) * jac.factors.w[static_cast<std::size_t>(j)];
            CHECK(std::abs(jac.T(k, j) - prod) <= 1e-13);
        }

    // Column norms scale exactly as the depth weights.
    const double ell = 2.4 / N;
    auto col_norm = [&](int j) {
        double acc = 0.0;
        for (int k = 0; k < design.M(); ++k) acc += std::norm(jac.T(k, j));
        return std::sqrt(acc);
    };
    for (int j = 1; j < N; ++j)
        CHECK(col_norm(j) / col_norm(0) ==
              Catch::Approx(std::exp(-design.eta * j * ell)).epsilon(1e-12));

    // γ vanishes when x_k ℓ hits 2π·integer and η → 0⁺.
    const double ell2 = 0.5;
    const SeamDesign tiny_eta(1e-12, {4.0 * pi / ell2});
    const BlockJacobian jz = jacobian_block_free(tiny_eta, 1, ell2);
    CHECK(std::abs(jz.factors.gamma[0]) < 2e-12);
}

TEST_CASE("block Jacobian rows agree with dv_free", "[seam]") {
    const int N = 8;
    const double Lambda = 4.0;
    const SeamDesign design = half_shift_design(5, 0.6, Lambda / N);
    const BlockJacobian jac = jacobian_block_free(design, N, Lambda);
    SplitMix64 rng(317);
    const std::vector<cplx> dq = random_theta(rng, N, 0.5);
    const auto rows = jac.T.apply(dq);
    TracelessDirection dir{dq};
    for (int k = 0; k < design.M(); ++k) {
        const cplx expect = dv_free(dir, Lambda, design.z(k));
        CHECK(std::abs(rows[static_cast<std::size_t>(k)] - expect) <=
              1e-12 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("feature transforms: closed forms and limits", "[seam]") {
    // φ ≡ 1 on [0, Λ], z = i → 1 − e^{−Λ}.
    const double Lambda = 2.0;
    const Feature one = constant_feature(5, Lambda, 1.0);
    CHECK(std::abs(feature_hat(one, iu) - (1.0 - std::exp(-Lambda))) < 1e-14);

    const Feature zero = constant_feature(5, Lambda, 0.0);
    CHECK(std::abs(feature_hat(zero, cplx(1.3, 0.4))) == 0.0);

    // Indicator of [jℓ, (j+1)ℓ] → e^{iz(j+½)ℓ}·2 sin(zℓ/2)/z.
    const int n = 8;
    const double ell = Lambda / n;
    const cplx z(1.7, 0.6);
    for (int j : {0, 3, 7}) {
        const Feature ind = indicator_feature(n, Lambda, j);
        const cplx expect = std::exp(iu * z * (j + 0.5) * ell) * 2.0 * std::sin(0.5 * z * ell) / z;
        CHECK(std::abs(feature_hat(ind, z) - expect) < 1e-14);
    }

    // Tiny |z|: series branch agrees with the plain mean value ∫φ.
    const Feature ramp = hat_feature(6, 3.0, 2);
    CHECK(std::abs(feature_hat(ramp, cplx(1e-12, 1e-12)) - 0.5) < 1e-10);
}

TEST_CASE("general Jacobian: indicator basis reproduces the block Jacobian", "[seam]") {
    const int N = 6, M = 4;
    const double Lambda = 3.0;
    const SeamDesign design(0.5, {0.2, 1.9, -0.8, 3.4});
    REQUIRE(design.M() == M);

    FeatureBasis indicators;
    for (int j = 0; j < N; ++j)
        indicators.features.push_back(indicator_feature(N, Lambda, j));
    const CMatrix Tg = jacobian_general_free(indicators, design);
    const CMatrix Tb = jacobian_block_free(design, N, Lambda).T;
    CHECK(max_abs_entry(Tg - Tb) <= 1e-12);

    // A zero feature gives a zero column.
    FeatureBasis with_zero = indicators;
    with_zero.features[2] = constant_feature(N, Lambda, 0.0);
    const CMatrix Tz = jacobian_general_free(with_zero, design);
    for (int k = 0; k < M; ++k) CHECK(std::abs(Tz(k, 2)) == 0.0);
}

TEST_CASE("general Jacobian obeys the integration-by-parts column bounds", "[seam]") {
    const int cells = 10;
    const double Lambda = 4.0;
    const double eta = 0.7;
    const SeamDesign design(eta, {-3.0, -1.0, 0.5, 2.0, 4.5});

    FeatureBasis hats;
    hats.smooth = true;
    for (int j = 0; j < cells - 1; ++j) hats.features.push_back(hat_feature(cells, Lambda, j));
    const CMatrix T = jacobian_general_free(hats, design);

    for (int j = 0; j < hats.N(); ++j) {
        const Feature& phi = hats.features[static_cast<std::size_t>(j)];
        const double bound = ibp_bound(phi, eta); // |zφ̂(z)| ≤ this on the line
        for (int k = 0; k < design.M(); ++k) CHECK(std::abs(T(k, j)) <= bound + 1e-12);
    }

    // Depth-shifted bound for features supported in [s⋆, Λ]: the column norm
    // carries the full e^{−ηs⋆} attenuation.
    const double ell = Lambda / cells;
    for (int deep = 5; deep + 1 < cells; ++deep) {
        const Feature phi = hat_feature(cells, Lambda, deep);
        const double s_star = deep * ell;
        CMatrix col(design.M(), 1);
        for (int k = 0; k < design.M(); ++k)
            col(k, 0) = -iu * design.z(k) * feature_hat(phi, design.z(k));
        const double bound = std::sqrt(static_cast<double>(design.M())) *
                             std::exp(-eta * s_star) *
                             (0.0 + std::abs(phi.value_at_right_edge()) +
                              feature_deriv_l1(phi));
        CHECK(col.frobenius() <= bound + 1e-12);
    }
}

TEST_CASE("FD Jacobian at the free base matches the realified exact Jacobian", "[seam]") {
    const int N = 8, M = 8;
    const double eta = 0.5, Lambda = 4.0;
    const BlockHamiltonian base = free_base(N, Lambda);
    const SeamDesign design = half_shift_design(M, eta, Lambda / N);

    const CMatrix fd = jacobian_fd(base, std::vector<double>(2 * N, 0.0), design, 1e-6);
    const CMatrix exact = realify(jacobian_block_free(design, N, Lambda).T);
    CHECK(max_abs_entry(fd - exact) <= 1e-5);

    // Complex linearity at the free point: K⁽²⁾ = 0 there.
    const auto defects = complex_linearity_defect(fd);
    for (const double d : defects) CHECK(d <= 1e-5);

    // Second-order stencil: quartering the error when the step halves, in the
    // regime where truncation dominates roundoff.
    const CMatrix fd_coarse = jacobian_fd(base, std::vector<double>(2 * N, 0.0), design, 2e-3);
    const CMatrix fd_fine = jacobian_fd(base, std::vector<double>(2 * N, 0.0), design, 1e-3);
    const double dev_coarse = max_abs_entry(fd_coarse - exact);
    const double dev_fine = max_abs_entry(fd_fine - exact);
    CHECK(dev_coarse / dev_fine == Catch::Approx(4.0).margin(1.0));
}

TEST_CASE("complex-linearity defect scales quadratically in the base amplitude",
          "[seam]") {
    const int N = 6;
    const double Lambda = 3.0;
    const SeamDesign design = half_shift_design(6, 0.6, Lambda / N);
    SplitMix64 rng(331);
    std::vector<cplx> shape(static_cast<std::size_t>(N));
    for (auto& v : shape) v = rng.complex_disk(1.0);

    std::vector<double> amps{0.05, 0.1, 0.2};
    std::vector<double> defects;
    for (const double t : amps) {
        std::vector<cplx> p(shape);
        for (auto& v : p) v *= t;
        const BlockHamiltonian base(N, Lambda, p, 0.05);
        const CMatrix fd = jacobian_fd(base, std::vector<double>(2 * N, 0.0), design, 1e-5);
        const auto d = complex_linearity_defect(fd);
        defects.push_back(*std::max_element(d.begin(), d.end()));
    }
    CHECK(oracles::loglog_slope(amps, defects) == Catch::Approx(2.0).margin(0.3));
}

TEST_CASE("realification duplicates singular values and preserves smin", "[seam]") {
    SplitMix64 rng(337);
    CMatrix T(5, 4);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 4; ++c) T(r, c) = cplx(rng.normal(), rng.normal());
    const auto sc = singular_values(T);
    const auto sr = singular_values(realify(T));
    REQUIRE(sr.size() == 2 * sc.size());
    for (std::size_t i = 0; i < sc.size(); ++i) {
        CHECK(sr[2 * i] == Catch::Approx(sc[i]).margin(1e-12));
        CHECK(sr[2 * i + 1] == Catch::Approx(sc[i]).margin(1e-12));
    }
    CHECK(smin_domain(realify(T)) == Catch::Approx(smin_domain(T)).margin(1e-12));
}
