// Central constants record: every numerical threshold the library enforces
// lives here, so the implementation and the test suite agree by construction.
// Tests reference these constants instead of re-typing literals.
#pragma once

namespace weylseam::tol {

// --- dense kernels -------------------------------------------------------
inline constexpr double jacobi_offdiag   = 1e-14; // one-sided Jacobi sweep stop
inline constexpr int    jacobi_max_sweeps = 64;   // quadratic convergence; never hit
inline constexpr double lu_pivot_rel     = 1e-14; // pivot / ‖A‖_F singularity cutoff
inline constexpr double solve_residual   = 1e-10; // ‖Ax−b‖ ≤ this·(‖A‖_F‖x‖+‖b‖)
inline constexpr double expm_trace_rel   = 1e-12; // |tr A| ≤ this·‖A‖_op gate
inline constexpr double expm_series_cut  = 1e-4;  // |μ| below which the sinc/cos series run
inline constexpr double expm_det_one     = 1e-10; // det(expm) = 1 assertion

// --- transfer matrices ---------------------------------------------------
inline constexpr double transfer_det_one   = 1e-10; // |det Φ − 1|
inline constexpr double transfer_symplectic = 1e-9; // ‖ΦᵀJΦ − J‖
inline constexpr double transfer_norm_slack = 1e-8; // ‖Φ‖_op ≤ e^{|z|(s−t)} + slack

// --- Weyl / Schur --------------------------------------------------------
inline constexpr double weyl_denominator_rel = 1e-13; // |D−iB| < this·e^{(Im z)Λ/2}
inline constexpr double pole_flag_rel        = 1e-12; // |D−iB| < this·max(|iA−C|,1)
inline constexpr double free_point           = 1e-12; // |m−i|, |v| at the free Hamiltonian

// --- variation / kernels -------------------------------------------------
inline constexpr double tilde_denominator = 1e-12; // |Φ̃₂₂(Λ,0)| collapse cutoff
inline constexpr double budget_min_abs_z  = 1e-8;  // remainder budget needs |z| ≥ this

// --- sampling designs ----------------------------------------------------
inline constexpr double half_shift_match = 1e-12; // node multiset comparison
inline constexpr double tight_frame      = 1e-10; // ‖F*F − M·I‖_F at exact designs
inline constexpr double rank_deficient   = 1e-14; // α cutoff for the inversion budget

// --- spectral ------------------------------------------------------------
inline constexpr double density_negativity = 1e-12; // f± ≥ −this else ConstructionError
inline constexpr double near_pole          = 1e-12; // |1−v| cutoff in im_m_from_v
inline constexpr double damping_slack      = 1e-3;  // measured ≤ bound·(1+this)

} // namespace weylseam::tol
