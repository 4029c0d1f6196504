#pragma once

// Unit, idempotent and zero-divisor checks in R(K,G), and exhaustive searches
// over finite slices of R(F_q, G).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nearca/error.hpp"
#include "nearca/matrix.hpp"
#include "nearca/near_ring.hpp"

namespace nearca {

enum class UnitKind { trivial_unit, nontrivial_unit_witness, not_a_unit_pair };

inline std::string to_string(UnitKind k)
{
    switch (k) {
    case UnitKind::trivial_unit:
        return "TrivialUnit";
    case UnitKind::nontrivial_unit_witness:
        return "NontrivialUnitWitness";
    case UnitKind::not_a_unit_pair:
        return "NotAUnitPair";
    }
    return {};
}

template <ExactField F>
struct UnitClassification {
    UnitKind kind = UnitKind::not_a_unit_pair;
    // alpha = a X_g - a b, beta = a^-1 X_{g^-1} + b
    std::optional<typename F::element> a;
    std::optional<GroupElement> g;
    std::optional<typename F::element> b;
    NearRingElement<F> product;         // alpha * beta
    NearRingElement<F> reverse_product; // beta * alpha, logged for direct finiteness
    bool order_checked = true;          // false when G has no bi-invariant order
};

/// Splits alpha = a X_g + c (a != 0). Returns nothing for any other shape.
template <ExactField F>
std::optional<std::pair<GroupElement, std::pair<typename F::element, typename F::element>>>
affine_form(const NearRingElement<F>& x)
{
    std::optional<GroupElement> g;
    auto a = x.field().zero();
    auto c = x.field().zero();
    for (const auto& [u, coeff] : x.terms()) {
        if (u.is_zero()) {
            c = coeff;
        } else if (u.total_degree() == 1 && !g) {
            g = u.entries()[0].first;
            a = coeff;
        } else {
            return std::nullopt;
        }
    }
    if (!g) {
        return std::nullopt;
    }
    return std::make_pair(*g, std::make_pair(a, c));
}

template <ExactField F>
UnitClassification<F> classify_unit_pair(const NearRingElement<F>& alpha, const NearRingElement<F>& beta,
                                         const StarOptions& opt = {})
{
    UnitClassification<F> r{UnitKind::not_a_unit_pair, {}, {}, {}, star(alpha, beta, opt), star(beta, alpha, opt),
                            alpha.group().is_orderable()};
    if (!(r.product == NearRingElement<F>::identity(alpha.group_ptr(), alpha.field()))) {
        return r;
    }
    r.kind = UnitKind::nontrivial_unit_witness;
    auto fa = affine_form(alpha);
    auto fb = affine_form(beta);
    if (!fa || !fb) {
        return r;
    }
    const auto& grp = alpha.group();
    auto [g, ac] = *fa;
    auto [h, bd] = *fb;
    auto a = ac.first;
    auto b = bd.second;
    if (!(h == grp.inverse(g)) || !(bd.first == a.inverse()) || !(ac.second == -(a * b))) {
        return r;
    }
    r.kind = UnitKind::trivial_unit;
    r.a = a;
    r.g = g;
    r.b = b;
    return r;
}

// ---------------------------------------------------------------------------

enum class SearchKind { unit, idempotent, zero_divisor };

inline std::string to_string(SearchKind k)
{
    switch (k) {
    case SearchKind::unit:
        return "unit";
    case SearchKind::idempotent:
        return "idempotent";
    case SearchKind::zero_divisor:
        return "zero_divisor";
    }
    return {};
}

struct SearchOptions {
    std::uint64_t max_space = 10'000'000; // elements enumerated by the outer loop
    unsigned workers = 1;
    StarOptions star;
};

template <ExactField F>
struct Finding {
    SearchKind kind;
    std::uint64_t alpha_index;
    std::uint64_t beta_index;
    NearRingElement<F> alpha;
    NearRingElement<F> beta;
    NearRingElement<F> product;
    std::string classification;
    std::optional<NearRingElement<F>> reverse_product;
};

template <ExactField F>
struct SearchResult {
    std::vector<ExponentVector> monomials;
    std::uint64_t space_size = 0;
    std::vector<Finding<F>> findings;
};

/// All exponent vectors supported in `support` with total degree <= max_degree,
/// in canonical order (total degree, then sparse form).
inline std::vector<ExponentVector> monomial_basis(const FiniteSubset& support, std::uint64_t max_degree)
{
    std::vector<ExponentVector> out{ExponentVector()};
    std::vector<ExponentVector> layer{ExponentVector()};
    for (std::uint64_t d = 1; d <= max_degree; ++d) {
        std::vector<ExponentVector> next;
        for (const auto& u : layer) {
            for (const auto& g : support) {
                // extend only with elements >= the largest present, so each multiset appears once
                if (!u.is_zero() && g < u.entries().back().first) {
                    continue;
                }
                next.push_back(u + ExponentVector::dirac(g));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <FiniteExactField F>
class SearchSpace {
public:
    SearchSpace(GroupPtr group, F field, std::vector<ExponentVector> monomials)
        : group_(std::move(group)), field_(std::move(field)), monomials_(std::move(monomials))
    {
        q_ = field_.cardinality();
        double est = std::pow(static_cast<double>(q_), static_cast<double>(monomials_.size()));
        if (est > 1.8e19) {
            throw search_space_too_large("search space does not fit in 64 bits", est);
        }
        size_ = 1;
        for (std::size_t i = 0; i < monomials_.size(); ++i) {
            size_ *= q_;
        }
    }

    std::uint64_t size() const noexcept { return size_; }
    std::uint64_t q() const noexcept { return q_; }
    const std::vector<ExponentVector>& monomials() const noexcept { return monomials_; }

    /// Coefficient j of element `index` is digit j in base q.
    NearRingElement<F> element(std::uint64_t index) const
    {
        NearRingElement<F> r(group_, field_);
        for (const auto& m : monomials_) {
            r.add_term(m, field_.element_at(index % q_));
            index /= q_;
        }
        return r;
    }

    std::uint64_t index_of(const std::vector<typename F::element>& coeffs) const
    {
        std::uint64_t idx = 0;
        for (std::size_t j = coeffs.size(); j-- > 0;) {
            idx = idx * q_ + field_.index_of(coeffs[j]);
        }
        return idx;
    }

private:
    GroupPtr group_;
    F field_;
    std::vector<ExponentVector> monomials_;
    std::uint64_t q_ = 0;
    std::uint64_t size_ = 0;
};

namespace detail {

// For fixed beta, alpha * beta = sum_j a_j (M_j * beta) is linear in the
// coefficients a_j of alpha. Returns every coefficient vector solving
// sum_j a_j (M_j * beta) = target, in ascending element index.
template <FiniteExactField F>
std::vector<std::uint64_t> solve_left_factor(const SearchSpace<F>& space, const F& field,
                                             const std::vector<NearRingElement<F>>& images,
                                             const NearRingElement<F>& target)
{
    const std::size_t m = images.size();
    std::map<ExponentVector, std::size_t> row_of;
    for (const auto& im : images) {
        for (const auto& [u, c] : im.terms()) {
            row_of.try_emplace(u, row_of.size());
        }
    }
    for (const auto& [u, c] : target.terms()) {
        row_of.try_emplace(u, row_of.size());
    }
    Matrix<F> a(field, row_of.size(), m);
    Matrix<F> t(field, row_of.size(), 1);
    for (std::size_t j = 0; j < m; ++j) {
        for (const auto& [u, c] : images[j].terms()) {
            a(row_of[u], j) = c;
        }
    }
    for (const auto& [u, c] : target.terms()) {
        t(row_of[u], 0) = c;
    }
    auto x0 = solve(a, t);
    if (!x0) {
        return {};
    }
    auto kernel = matrix_rank_kernel(a).kernel_basis;
    const std::uint64_t q = field.cardinality();
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        combos *= q;
    }
    std::vector<std::uint64_t> out;
    out.reserve(combos);
    for (std::uint64_t c = 0; c < combos; ++c) {
        std::vector<typename F::element> coeffs(m, field.zero());
        for (std::size_t j = 0; j < m; ++j) {
            coeffs[j] = (*x0)(j, 0);
        }
        std::uint64_t rest = c;
        for (const auto& kv : kernel) {
            auto s = field.element_at(rest % q);
            rest /= q;
            for (std::size_t j = 0; j < m; ++j) {
                coeffs[j] = coeffs[j] + s * kv[j];
            }
        }
        out.push_back(space.index_of(coeffs));
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <class Fn>
void run_partitioned(std::uint64_t n, unsigned workers, Fn&& fn)
{
    workers = std::max(1U, workers);
    if (workers == 1 || n < 2) {
        fn(0U, std::uint64_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t lo = n * w / workers;
        std::uint64_t hi = n * (w + 1) / workers;
        pool.emplace_back([&, w, lo, hi] {
            try {
                fn(w, lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace detail

/// Exhaustive search over all elements of R(F_q, G) whose monomials are
/// supported in `support` with total degree <= max_degree. Unit and
/// zero-divisor pairs are found by solving, for each beta, the linear system
/// in the coefficients of alpha; idempotents are enumerated directly.
/// Findings are in ascending (beta, alpha) index order for pairs and alpha
/// order for idempotents, independent of the worker count.
template <FiniteExactField F>
SearchResult<F> exhaustive_search(SearchKind kind, const GroupPtr& group, const F& field, const FiniteSubset& support,
                                  std::uint64_t max_degree, const SearchOptions& opt = {})
{
    for (const auto& g : support) {
        group->validate(g);
    }
    SearchResult<F> result;
    result.monomials = monomial_basis(support, max_degree);
    double est = std::pow(static_cast<double>(field.cardinality()), static_cast<double>(result.monomials.size()));
    if (est > static_cast<double>(opt.max_space)) {
        throw search_space_too_large("search space of about " + std::to_string(static_cast<long double>(est)) +
                                         " elements exceeds the cap of " + std::to_string(opt.max_space),
                                     est);
    }
    SearchSpace<F> space(group, field, result.monomials);
    result.space_size = space.size();

    std::vector<NearRingElement<F>> monos;
    for (const auto& m : result.monomials) {
        monos.push_back(NearRingElement<F>::monomial(group, field, m, field.one()));
    }
    const auto identity = NearRingElement<F>::identity(group, field);
    const auto zero = NearRingElement<F>::zero(group, field);

    unsigned workers = std::max(1U, opt.workers);
    std::vector<std::vector<Finding<F>>> parts(workers);
    detail::run_partitioned(space.size(), workers, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
        auto& out = parts[w];
        for (std::uint64_t i = lo; i < hi; ++i) {
            auto x = space.element(i);
            if (kind == SearchKind::idempotent) {
                auto p = star(x, x, opt.star);
                if (p == x) {
                    std::string cls = x.is_constant() ? "constant" : (x == identity ? "identity" : "other");
                    out.push_back({kind, i, i, x, x, std::move(p), cls, std::nullopt});
                }
                continue;
            }
            if (kind == SearchKind::zero_divisor && x.is_constant()) {
                continue;
            }
            std::vector<NearRingElement<F>> images;
            images.reserve(monos.size());
            for (const auto& m : monos) {
                images.push_back(star(m, x, opt.star));
            }
            auto sols = detail::solve_left_factor(space, field, images,
                                                  kind == SearchKind::unit ? identity : zero);
            for (auto ai : sols) {
                if (kind == SearchKind::zero_divisor && ai == 0) {
                    continue;
                }
                auto a = space.element(ai);
                if (kind == SearchKind::unit) {
                    auto c = classify_unit_pair(a, x, opt.star);
                    out.push_back({kind, ai, i, a, x, c.product, to_string(c.kind), c.reverse_product});
                } else {
                    auto p = star(a, x, opt.star);
                    out.push_back({kind, ai, i, a, x, std::move(p), "ZeroDivisorPair", std::nullopt});
                }
            }
        }
    });
    for (auto& part : parts) {
        for (auto& f : part) {
            result.findings.push_back(std::move(f));
        }
    }
    return result;
}

} // namespace nearca
