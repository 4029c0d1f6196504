#pragma once

// Rank computations for linear cellular automata: window matrices, the
// dimension of Gamma_Omega, mean-dimension estimates on boxes, window-bounded
// surjectivity and pre-injectivity checks, and left-inverse synthesis.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nearca/ca.hpp"
#include "nearca/error.hpp"
#include "nearca/matrix.hpp"

namespace nearca {

enum class WindowKind { plus, minus, supported };

template <ExactField F>
struct WindowMatrix {
    FiniteSubset row_cells; // output cells, n rows each
    FiniteSubset col_cells; // input cells, n columns each
    SparseMatrix<F> matrix;
};

namespace detail {

template <ExactField F>
const LinearRule<F>& require_linear(const CellularAutomaton<F>& tau)
{
    if (!tau.is_linear()) {
        throw unsupported_error("linear rule required");
    }
    return tau.linear();
}

} // namespace detail

/// Block (g_out, g_in) is symbol(g_out^-1 g_in).
///   plus:      A^{Omega M} -> A^Omega
///   minus:     A^Omega -> A^{Omega^-}
///   supported: configurations supported in Omega -> A^{Omega M^-1}
template <ExactField F>
WindowMatrix<F> window_matrix(const CellularAutomaton<F>& tau, const FiniteSubset& omega, WindowKind kind)
{
    const auto& rule = detail::require_linear(tau);
    const auto& grp = tau.group();
    const std::size_t n = tau.dimension();
    const auto m = tau.window_memory();
    FiniteSubset rows, cols;
    switch (kind) {
    case WindowKind::plus:
        rows = omega;
        cols = product(grp, omega, m);
        break;
    case WindowKind::minus:
        rows = interior(grp, omega, m);
        cols = omega;
        break;
    case WindowKind::supported:
        rows = product(grp, omega, inverse_set(grp, m));
        cols = omega;
        break;
    }
    SparseMatrix<F> sm{tau.field(), rows.size() * n, cols.size() * n, {}};
    sm.data.resize(sm.rows);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::pair<std::size_t, const Matrix<F>*>> blocks;
        for (const auto& [h, a] : rule.symbol.terms()) {
            if (auto c = cols.index_of(grp.multiply(rows[r], h))) {
                blocks.emplace_back(*c, &a);
            }
        }
        std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t i = 0; i < n; ++i) {
            auto& row = sm.data[r * n + i];
            for (const auto& [c, a] : blocks) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (!(*a)(i, j).is_zero()) {
                        row.emplace_back(c * n + j, (*a)(i, j));
                    }
                }
            }
        }
    }
    return {std::move(rows), std::move(cols), std::move(sm)};
}

template <ExactField F>
std::vector<typename F::element> flatten(const Pattern<F>& p, const FiniteSubset& cells, const Group& grp)
{
    std::vector<typename F::element> v;
    for (const auto& g : cells) {
        for (const auto& x : p.at(grp, g)) {
            v.push_back(x);
        }
    }
    return v;
}

template <ExactField F>
Pattern<F> unflatten(const std::vector<typename F::element>& v, const FiniteSubset& cells, std::size_t n)
{
    std::vector<CellValue<F>> vals;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        vals.emplace_back(v.begin() + static_cast<long>(i * n), v.begin() + static_cast<long>((i + 1) * n));
    }
    return Pattern<F>(cells, std::move(vals));
}

/// dim Gamma_Omega = rank of the plus window matrix.
template <ExactField F>
std::size_t gamma_dim(const CellularAutomaton<F>& tau, const FiniteSubset& omega)
{
    return rank(window_matrix(tau, omega, WindowKind::plus).matrix);
}

struct MdimEstimate {
    std::vector<Rational> q; // q[i-1] = gamma_dim(F_i) / |F_i|
    Rational estimate;       // max of q over the second half of the range
};

template <ExactField F>
MdimEstimate mdim_estimate(const CellularAutomaton<F>& tau, std::size_t i_max)
{
    const auto& grp = tau.group();
    if (grp.kind() != GroupKind::free_abelian) {
        throw unsupported_error("mean dimension estimates use boxes in Z^d");
    }
    if (i_max == 0) {
        throw error("i_max must be >= 1");
    }
    MdimEstimate r;
    for (std::size_t i = 1; i <= i_max; ++i) {
        auto box_i = folner_set(grp, i);
        auto rk = gamma_dim(tau, box_i);
        r.q.push_back(Rational(static_cast<std::int64_t>(rk), static_cast<std::int64_t>(box_i.size())));
    }
    r.estimate = r.q[i_max / 2];
    for (std::size_t i = i_max / 2; i < i_max; ++i) {
        if (r.estimate < r.q[i]) {
            r.estimate = r.q[i];
        }
    }
    return r;
}

/// Windows for the bounded checks: boxes [0,i)^d for i = 1..2r+1 in Z^d,
/// balls B_S(r) otherwise.
inline std::vector<FiniteSubset> check_windows(const Group& grp, std::size_t r_max)
{
    std::vector<FiniteSubset> out;
    if (grp.kind() == GroupKind::free_abelian) {
        for (std::size_t i = 1; i <= 2 * r_max + 1; ++i) {
            out.push_back(folner_set(grp, i));
        }
    } else {
        for (std::size_t r = 0; r <= r_max; ++r) {
            out.push_back(ball(grp, r));
        }
    }
    return out;
}

template <ExactField F>
struct SurjectivityVerdict {
    bool full_rank = true;              // FullRankUpTo(last window) when true
    FiniteSubset window;                // failing window, or the largest tested one
    std::size_t rank = 0;
    std::size_t expected = 0;
};

template <ExactField F>
SurjectivityVerdict<F> surjectivity_check(const CellularAutomaton<F>& tau, std::size_t r_max = 8)
{
    SurjectivityVerdict<F> v;
    for (const auto& w : check_windows(tau.group(), r_max)) {
        v.window = w;
        v.rank = gamma_dim(tau, w);
        v.expected = tau.dimension() * w.size();
        if (v.rank < v.expected) {
            v.full_rank = false;
            return v;
        }
    }
    return v;
}

template <ExactField F>
struct PreinjectivityVerdict {
    bool kernel_free = true;              // KernelFreeUpTo(last window) when true
    FiniteSubset window;                  // failing window, or the largest tested one
    std::optional<Pattern<F>> witness;    // finitely supported c != 0 with tau(c) = 0
};

template <ExactField F>
PreinjectivityVerdict<F> preinjectivity_check(const CellularAutomaton<F>& tau, std::size_t r_max = 8)
{
    PreinjectivityVerdict<F> v;
    const std::size_t n = tau.dimension();
    for (const auto& w : check_windows(tau.group(), r_max)) {
        v.window = w;
        auto wm = window_matrix(tau, w, WindowKind::supported);
        auto e = echelon_of(wm.matrix);
        if (e.rank() < wm.matrix.cols) {
            auto basis = e.kernel_basis();
            auto full = unflatten<F>(basis.front(), w, n);
            std::vector<std::pair<GroupElement, CellValue<F>>> cells;
            for (std::size_t i = 0; i < full.domain.size(); ++i) {
                if (std::any_of(full.values[i].begin(), full.values[i].end(), [](const auto& x) { return !x.is_zero(); })) {
                    cells.emplace_back(full.domain[i], full.values[i]);
                }
            }
            v.kernel_free = false;
            v.witness = Pattern<F>::from_pairs(std::move(cells));
            return v;
        }
    }
    return v;
}

template <ExactField F>
struct LeftInverseResult {
    std::optional<CellularAutomaton<F>> inverse;
    std::size_t radius = 0; // radius where found, or r_max
};

/// Looks for h with h * W_plus(B_S(r)) = projection onto the 1_G block; the
/// blocks of h form the symbol of a left inverse with memory set in B_S(r).
/// Success is confirmed by multiplying symbols back to the identity.
template <ExactField F>
LeftInverseResult<F> find_left_inverse(const CellularAutomaton<F>& tau, std::size_t r_max)
{
    detail::require_linear(tau);
    const auto& grp = tau.group();
    const auto& field = tau.field();
    const std::size_t n = tau.dimension();
    for (std::size_t r = 0; r <= r_max; ++r) {
        auto omega = ball(grp, r);
        auto wm = window_matrix(tau, omega, WindowKind::plus);
        auto one_col = wm.col_cells.index_of(grp.identity());
        if (!one_col) {
            continue;
        }
        // solve W^T h^T = P^T
        auto wt = wm.matrix.to_dense().transpose();
        Matrix<F> pt(field, wt.rows(), n);
        for (std::size_t i = 0; i < n; ++i) {
            pt(*one_col * n + i, i) = field.one();
        }
        auto ht = solve(wt, pt);
        if (!ht) {
            continue;
        }
        MatrixRing<F> mr{field, n};
        MatrixGroupRing<F> sym(tau.group_ptr(), mr);
        for (std::size_t c = 0; c < omega.size(); ++c) {
            Matrix<F> block(field, n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    block(i, j) = (*ht)(c * n + j, i);
                }
            }
            sym.set(omega[c], block);
        }
        if (!(sym * tau.linear().symbol == MatrixGroupRing<F>::one(tau.group_ptr(), mr))) {
            throw error("left inverse candidate failed verification");
        }
        return {psi(sym), r};
    }
    return {std::nullopt, r_max};
}

enum class GoeVerdict { consistent_surjective, consistent_non_surjective, theorem_violation_alarm };

inline std::string to_string(GoeVerdict v)
{
    switch (v) {
    case GoeVerdict::consistent_surjective:
        return "consistent-surjective";
    case GoeVerdict::consistent_non_surjective:
        return "consistent-non-surjective";
    case GoeVerdict::theorem_violation_alarm:
        return "theorem-violation-alarm";
    }
    return {};
}

template <ExactField F>
struct GoeReport {
    MdimEstimate mdim;
    SurjectivityVerdict<F> surjectivity;
    PreinjectivityVerdict<F> preinjectivity;
    GoeVerdict verdict;
};

/// Surjective and pre-injective must agree, and the mean dimension estimate
/// equals n exactly when both hold.
template <ExactField F>
GoeReport<F> goe_report(const CellularAutomaton<F>& tau, std::size_t i_max = 32, std::size_t r_max = 8)
{
    GoeReport<F> rep{mdim_estimate(tau, i_max), surjectivity_check(tau, r_max), preinjectivity_check(tau, r_max),
                     GoeVerdict::theorem_violation_alarm};
    const Rational n(static_cast<std::int64_t>(tau.dimension()));
    const bool s = rep.surjectivity.full_rank;
    const bool p = rep.preinjectivity.kernel_free;
    if (s && p && rep.mdim.estimate == n) {
        rep.verdict = GoeVerdict::consistent_surjective;
    } else if (!s && !p && rep.mdim.estimate < n) {
        rep.verdict = GoeVerdict::consistent_non_surjective;
    }
    return rep;
}

} // namespace nearca
