// Trace-normed Hamiltonians on [0, Λ] with a positivity margin.
//
// Both representations are piecewise constant: H(s) = ½I + X(q_j) on cell j,
// where X(h + ik) = [[h, k], [k, −h]] is the traceless symmetric part. The
// margin ε keeps every cell's eigenvalues ½ ± |q_j| inside (ε, 1−ε), which
// the perturbation and inversion layers rely on. Beyond Λ the system always
// continues with the free tail H ≡ ½I.
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "matrix.hpp"

namespace weylseam {

// X(q): the traceless symmetric 2×2 matrix with parameter q = h + ik.
inline Mat2 traceless_part(cplx q) {
    const double h = q.real(), k = q.imag();
    return {h, k, k, -h};
}

namespace detail {

inline void validate_cells(double Lambda, const std::vector<cplx>& params, double epsilon,
                           const char* what) {
    require(!params.empty(), ErrorKind::InvalidInput,
            std::string(what) + " needs at least one cell");
    require(std::isfinite(Lambda) && Lambda > 0.0, ErrorKind::InvalidInput,
            std::string(what) + " needs a positive total length");
    require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon < 0.5, ErrorKind::InvalidInput,
            std::string(what) + " margin must lie in (0, 1/2)");
    for (const auto& q : params) {
        require(std::isfinite(q.real()) && std::isfinite(q.imag()), ErrorKind::InvalidInput,
                std::string(what) + " has a non-finite parameter");
        // tiny slack so exact-margin constructions survive rounding of ½ − ε
        require(std::abs(q) <= 0.5 - epsilon + 1e-12, ErrorKind::InvalidInput,
                std::string(what) + " parameter exceeds the positivity margin");
    }
}

} // namespace detail

class BlockHamiltonian {
public:
    BlockHamiltonian(int n_blocks, double total_length, std::vector<cplx> params,
                     double epsilon)
        : Lambda_(total_length), q_(std::move(params)), epsilon_(epsilon) {
        require(n_blocks >= 1 && static_cast<std::size_t>(n_blocks) == q_.size(),
                ErrorKind::InvalidInput, "block count does not match parameter list");
        detail::validate_cells(Lambda_, q_, epsilon_, "BlockHamiltonian");
    }

    int cell_count() const { return static_cast<int>(q_.size()); }
    double total_length() const { return Lambda_; }
    double ell() const { return Lambda_ / static_cast<double>(q_.size()); }
    double epsilon() const { return epsilon_; }
    cplx param(int j) const { return q_[static_cast<std::size_t>(j)]; }
    const std::vector<cplx>& params() const { return q_; }

    bool is_free() const {
        for (const auto& q : q_)
            if (q != cplx{}) return false;
        return true;
    }

private:
    double Lambda_;
    std::vector<cplx> q_;
    double epsilon_;
};

class GridHamiltonian {
public:
    GridHamiltonian(int cell_count, double total_length, std::vector<cplx> p, double epsilon)
        : Lambda_(total_length), p_(std::move(p)), epsilon_(epsilon) {
        require(cell_count >= 1 && static_cast<std::size_t>(cell_count) == p_.size(),
                ErrorKind::InvalidInput, "cell count does not match parameter list");
        detail::validate_cells(Lambda_, p_, epsilon_, "GridHamiltonian");
    }

    int cell_count() const { return static_cast<int>(p_.size()); }
    double total_length() const { return Lambda_; }
    double ell() const { return Lambda_ / static_cast<double>(p_.size()); }
    double epsilon() const { return epsilon_; }
    cplx param(int j) const { return p_[static_cast<std::size_t>(j)]; }
    const std::vector<cplx>& params() const { return p_; }

private:
    double Lambda_;
    std::vector<cplx> p_;
    double epsilon_;
};

template <class H>
concept PiecewiseHamiltonian = requires(const H& h, int j) {
    { h.cell_count() } -> std::convertible_to<int>;
    { h.total_length() } -> std::convertible_to<double>;
    { h.ell() } -> std::convertible_to<double>;
    { h.param(j) } -> std::convertible_to<cplx>;
};

// H restricted to cell j: ½I + X(q_j). Trace 1 by construction;
// det = ¼ − |q_j|² > 0 is guaranteed by the margin.
template <PiecewiseHamiltonian H>
Mat2 cell_matrix(const H& h, int j) {
    Mat2 m = traceless_part(h.param(j));
    m.e[0] += 0.5;
    m.e[3] += 0.5;
    return m;
}

// Extend by free (q = 0) blocks of the same cell length; the Weyl coefficient
// is unchanged because the extension is exactly the free tail it replaces.
inline BlockHamiltonian append_free_tail_blocks(const BlockHamiltonian& h, int extra_blocks) {
    require(extra_blocks >= 0, ErrorKind::InvalidInput, "extra block count must be >= 0");
    if (extra_blocks == 0) return h;
    std::vector<cplx> q = h.params();
    q.insert(q.end(), static_cast<std::size_t>(extra_blocks), cplx{});
    const double ell = h.ell();
    return BlockHamiltonian(h.cell_count() + extra_blocks,
                            h.total_length() + extra_blocks * ell, std::move(q), h.epsilon());
}

// --- JSON interchange ------------------------------------------------------
// { "type": "block"|"grid", "Lambda": real, "params": [[re, im], ...],
//   "epsilon": real }

using HamiltonianVariant = std::variant<BlockHamiltonian, GridHamiltonian>;

template <PiecewiseHamiltonian H>
nlohmann::json hamiltonian_to_json(const H& h) {
    nlohmann::json j;
    j["type"] = std::is_same_v<H, BlockHamiltonian> ? "block" : "grid";
    j["Lambda"] = h.total_length();
    auto params = nlohmann::json::array();
    for (int k = 0; k < h.cell_count(); ++k)
        params.push_back({h.param(k).real(), h.param(k).imag()});
    j["params"] = std::move(params);
    j["epsilon"] = h.epsilon();
    return j;
}

inline nlohmann::json hamiltonian_to_json(const HamiltonianVariant& h) {
    return std::visit([](const auto& v) { return hamiltonian_to_json(v); }, h);
}

inline HamiltonianVariant hamiltonian_from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("type") && j.contains("Lambda") &&
                j.contains("params") && j.contains("epsilon"),
            ErrorKind::InvalidInput,
            "Hamiltonian JSON needs fields type, Lambda, params, epsilon");
    const std::string type = j.at("type").get<std::string>();
    const double Lambda = j.at("Lambda").get<double>();
    const double epsilon = j.at("epsilon").get<double>();
    std::vector<cplx> params;
    for (const auto& entry : j.at("params")) {
        require(entry.is_array() && entry.size() == 2, ErrorKind::InvalidInput,
                "Hamiltonian params must be [re, im] pairs");
        params.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    const int n = static_cast<int>(params.size());
    if (type == "block") return BlockHamiltonian(n, Lambda, std::move(params), epsilon);
    if (type == "grid") return GridHamiltonian(n, Lambda, std::move(params), epsilon);
    fail(ErrorKind::InvalidInput, "Hamiltonian type must be \"block\" or \"grid\"");
}

} // namespace weylseam
