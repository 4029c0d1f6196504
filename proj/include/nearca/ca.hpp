#pragma once

// Cellular automata over a group G with alphabet K^n:
//   (tau c)(g) = mu((g^-1 c)|_M),  (g^-1 c)(m) = c(g m).
// Local rules are tables, linear symbols G -> Mat_n(K), or near-ring
// polynomials. Configurations only ever appear as finite patterns.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nearca/error.hpp"
#include "nearca/fields.hpp"
#include "nearca/group_ring.hpp"
#include "nearca/groups.hpp"
#include "nearca/near_ring.hpp"

namespace nearca {

template <ExactField F>
using CellValue = std::vector<typename F::element>;

template <ExactField F>
struct Pattern {
    FiniteSubset domain;
    std::vector<CellValue<F>> values; // aligned with domain order

    Pattern() = default;
    Pattern(FiniteSubset d, std::vector<CellValue<F>> v) : domain(std::move(d)), values(std::move(v))
    {
        if (domain.size() != values.size()) {
            throw error("pattern domain and values differ in size");
        }
    }

    /// Builds a pattern from (element, value) pairs in any order.
    static Pattern from_pairs(std::vector<std::pair<GroupElement, CellValue<F>>> pairs)
    {
        std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<GroupElement> d;
        std::vector<CellValue<F>> v;
        for (auto& [g, x] : pairs) {
            if (!d.empty() && d.back() == g) {
                throw error("pattern assigns two values to one cell");
            }
            d.push_back(g);
            v.push_back(std::move(x));
        }
        return Pattern(FiniteSubset(std::move(d)), std::move(v));
    }

    const CellValue<F>* find(const GroupElement& g) const
    {
        auto i = domain.index_of(g);
        return i ? &values[*i] : nullptr;
    }

    const CellValue<F>& at(const Group& grp, const GroupElement& g) const
    {
        const auto* v = find(g);
        if (!v) {
            throw mismatch_error("pattern is not defined at " + grp.format(g));
        }
        return *v;
    }

    /// Restriction to a subdomain.
    Pattern restrict_to(const Group& grp, const FiniteSubset& sub) const
    {
        std::vector<CellValue<F>> v;
        for (const auto& g : sub) {
            v.push_back(at(grp, g));
        }
        return Pattern(sub, std::move(v));
    }

    /// (g p)(h) = p(g^-1 h), defined on g * domain.
    Pattern shifted(const Group& grp, const GroupElement& g) const
    {
        std::vector<std::pair<GroupElement, CellValue<F>>> pairs;
        for (std::size_t i = 0; i < domain.size(); ++i) {
            pairs.emplace_back(grp.multiply(g, domain[i]), values[i]);
        }
        return from_pairs(std::move(pairs));
    }

    friend bool operator==(const Pattern& a, const Pattern& b) { return a.domain == b.domain && a.values == b.values; }
};

// ---------------------------------------------------------------------------
// Local rules

template <ExactField F>
struct TableRule {
    std::vector<CellValue<F>> alphabet;
    FiniteSubset memory;
    // Output alphabet index for each input word; the word index is the mixed
    // radix number whose digit i is the alphabet index at memory[i].
    std::vector<std::size_t> table;

    static TableRule from_function(std::vector<CellValue<F>> alphabet, FiniteSubset memory,
                                   const std::function<std::size_t(const std::vector<std::size_t>&)>& fn)
    {
        TableRule r{std::move(alphabet), std::move(memory), {}};
        const std::size_t k = r.alphabet.size();
        std::size_t total = 1;
        for (std::size_t i = 0; i < r.memory.size(); ++i) {
            total *= k;
        }
        std::vector<std::size_t> word(r.memory.size(), 0);
        for (std::size_t w = 0; w < total; ++w) {
            std::size_t rest = w;
            for (auto& d : word) {
                d = rest % k;
                rest /= k;
            }
            r.table.push_back(fn(word));
        }
        r.validate();
        return r;
    }

    void validate() const
    {
        if (alphabet.empty()) {
            throw error("table rule needs a nonempty alphabet");
        }
        std::size_t total = 1;
        for (std::size_t i = 0; i < memory.size(); ++i) {
            total *= alphabet.size();
        }
        if (table.size() != total) {
            throw error("table rule is not total on A^M");
        }
        for (auto t : table) {
            if (t >= alphabet.size()) {
                throw error("table rule output outside the alphabet");
            }
        }
    }

    std::size_t symbol_index(const CellValue<F>& v) const
    {
        for (std::size_t i = 0; i < alphabet.size(); ++i) {
            if (alphabet[i] == v) {
                return i;
            }
        }
        throw mismatch_error("value outside the table rule's alphabet");
    }
};

template <ExactField F>
struct LinearRule {
    MatrixGroupRing<F> symbol; // tau(x)(g) = sum_h symbol(h) x(gh)
};

template <ExactField F>
struct PolynomialRule {
    NearRingElement<F> alpha; // tau(x)(g) = sum_u alpha(u) x^{gu}
};

enum class WindowMode { plus, minus };

template <ExactField F>
class CellularAutomaton {
public:
    using element = typename F::element;
    using rule_type = std::variant<TableRule<F>, LinearRule<F>, PolynomialRule<F>>;

    CellularAutomaton(GroupPtr group, F field, rule_type rule)
        : group_(std::move(group)), field_(std::move(field)), rule_(std::move(rule))
    {
        if (auto* t = std::get_if<TableRule<F>>(&rule_)) {
            t->validate();
            for (const auto& g : t->memory) {
                group_->validate(g);
            }
            dim_ = t->alphabet[0].size();
            for (const auto& a : t->alphabet) {
                if (a.size() != dim_) {
                    throw error("table alphabet mixes value dimensions");
                }
            }
        } else if (auto* l = std::get_if<LinearRule<F>>(&rule_)) {
            check_same_group(*group_, l->symbol.group());
            dim_ = l->symbol.ring().n;
        } else {
            check_same_group(*group_, std::get<PolynomialRule<F>>(rule_).alpha.group());
            dim_ = 1;
        }
    }

    const Group& group() const noexcept { return *group_; }
    const GroupPtr& group_ptr() const noexcept { return group_; }
    const F& field() const noexcept { return field_; }
    const rule_type& rule() const noexcept { return rule_; }
    std::size_t dimension() const noexcept { return dim_; }

    bool is_linear() const noexcept { return std::holds_alternative<LinearRule<F>>(rule_); }
    bool is_polynomial() const noexcept { return std::holds_alternative<PolynomialRule<F>>(rule_); }
    bool is_table() const noexcept { return std::holds_alternative<TableRule<F>>(rule_); }
    const LinearRule<F>& linear() const { return std::get<LinearRule<F>>(rule_); }
    const PolynomialRule<F>& polynomial() const { return std::get<PolynomialRule<F>>(rule_); }
    const TableRule<F>& table() const { return std::get<TableRule<F>>(rule_); }

    /// The memory set carried by the rule (support of the symbol or polynomial).
    FiniteSubset memory_set() const
    {
        if (auto* t = std::get_if<TableRule<F>>(&rule_)) {
            return t->memory;
        }
        if (auto* l = std::get_if<LinearRule<F>>(&rule_)) {
            return l->symbol.support();
        }
        return std::get<PolynomialRule<F>>(rule_).alpha.support();
    }

    /// A nonempty memory set used for windows ({1_G} when the rule reads nothing).
    FiniteSubset window_memory() const
    {
        auto m = memory_set();
        if (m.empty()) {
            return FiniteSubset{group_->identity()};
        }
        return m;
    }

    /// mu applied to y: M -> A.
    CellValue<F> local(const std::function<const CellValue<F>&(const GroupElement&)>& y) const
    {
        if (auto* t = std::get_if<TableRule<F>>(&rule_)) {
            const std::size_t k = t->alphabet.size();
            std::size_t w = 0;
            for (std::size_t i = t->memory.size(); i-- > 0;) {
                w = w * k + t->symbol_index(y(t->memory[i]));
            }
            return t->alphabet[t->table[w]];
        }
        if (auto* l = std::get_if<LinearRule<F>>(&rule_)) {
            CellValue<F> out(dim_, field_.zero());
            for (const auto& [h, a] : l->symbol.terms()) {
                const auto& v = y(h);
                check_value(v);
                for (std::size_t i = 0; i < dim_; ++i) {
                    for (std::size_t j = 0; j < dim_; ++j) {
                        out[i] = out[i] + a(i, j) * v[j];
                    }
                }
            }
            return out;
        }
        const auto& alpha = std::get<PolynomialRule<F>>(rule_).alpha;
        return {alpha.evaluate([&](const GroupElement& g) {
            const auto& v = y(g);
            check_value(v);
            return v[0];
        })};
    }

    /// (tau x)(g) for x given on a pattern containing gM.
    CellValue<F> evaluate(const Pattern<F>& x, const GroupElement& g) const
    {
        return local([&](const GroupElement& k) -> const CellValue<F>& { return x.at(*group_, group_->multiply(g, k)); });
    }

private:
    void check_value(const CellValue<F>& v) const
    {
        if (v.size() != dim_) {
            throw mismatch_error("cell value of dimension " + std::to_string(v.size()) + " for alphabet of dimension " +
                                 std::to_string(dim_));
        }
    }

    GroupPtr group_;
    F field_;
    rule_type rule_;
    std::size_t dim_ = 1;
};

/// Plus(omega): p given on omega*M (or more), output on omega.
/// Minus(omega): p given on omega, output on the M-interior of omega.
template <ExactField F>
Pattern<F> apply_window(const CellularAutomaton<F>& tau, const Pattern<F>& p, WindowMode mode, const FiniteSubset& omega)
{
    const auto& grp = tau.group();
    const auto m = tau.window_memory();
    FiniteSubset out_domain;
    if (mode == WindowMode::plus) {
        if (!product(grp, omega, m).is_subset_of(p.domain)) {
            throw mismatch_error("pattern does not cover the M-neighborhood of the window");
        }
        out_domain = omega;
    } else {
        if (!omega.is_subset_of(p.domain)) {
            throw mismatch_error("pattern does not cover the window");
        }
        out_domain = interior(grp, omega, m);
    }
    std::vector<CellValue<F>> values;
    values.reserve(out_domain.size());
    for (const auto& g : out_domain) {
        values.push_back(tau.evaluate(p, g));
    }
    return Pattern<F>(out_domain, std::move(values));
}

/// The CA with rule given by alpha: sigma_alpha(x)(g) = sum_u alpha(u) x^{gu}.
template <ExactField F>
CellularAutomaton<F> phi(const NearRingElement<F>& alpha)
{
    return CellularAutomaton<F>(alpha.group_ptr(), alpha.field(), PolynomialRule<F>{alpha});
}

/// Reads back the stored polynomial. Semantic identification is refused:
/// over a finite field distinct polynomials can define the same map.
template <ExactField F>
NearRingElement<F> phi_inverse(const CellularAutomaton<F>& tau)
{
    if (!tau.is_polynomial()) {
        throw unsupported_error("phi_inverse needs a polynomial-rule automaton");
    }
    return tau.polynomial().alpha;
}

/// The linear CA tau_alpha(x)(g) = sum_h alpha(h) x(gh).
template <ExactField F>
CellularAutomaton<F> psi(const MatrixGroupRing<F>& alpha)
{
    return CellularAutomaton<F>(alpha.group_ptr(), alpha.ring().field, LinearRule<F>{alpha});
}

template <ExactField F>
NearRingElement<F> linear_to_polynomial(const LinearRule<F>& l)
{
    if (l.symbol.ring().n != 1) {
        throw unsupported_error("only one-dimensional linear rules are polynomials");
    }
    NearRingElement<F> r(l.symbol.group_ptr(), l.symbol.ring().field);
    for (const auto& [h, a] : l.symbol.terms()) {
        r.add_term(ExponentVector::dirac(h), a(0, 0));
    }
    return r;
}

namespace detail {

template <ExactField F>
std::vector<CellValue<F>> enumerate_alphabet(const CellularAutomaton<F>& tau, std::size_t cap)
{
    if (tau.is_table()) {
        return tau.table().alphabet;
    }
    if constexpr (FiniteExactField<F>) {
        const auto& f = tau.field();
        const std::uint64_t q = f.cardinality();
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < tau.dimension(); ++i) {
            total *= q;
            if (total > cap) {
                throw unsupported_error("alphabet too large to tabulate");
            }
        }
        std::vector<CellValue<F>> out;
        for (std::uint64_t w = 0; w < total; ++w) {
            CellValue<F> v;
            std::uint64_t rest = w;
            for (std::size_t i = 0; i < tau.dimension(); ++i) {
                v.push_back(f.element_at(rest % q));
                rest /= q;
            }
            out.push_back(std::move(v));
        }
        return out;
    } else {
        throw unsupported_error("composition with a table rule needs a finite alphabet");
    }
}

} // namespace detail

/// tau o sigma. Linear with linear multiplies symbols, polynomial with
/// polynomial uses the star product; anything involving a table rule is
/// tabulated on the memory set M_tau * M_sigma.
template <ExactField F>
CellularAutomaton<F> compose(const CellularAutomaton<F>& tau, const CellularAutomaton<F>& sigma,
                             std::size_t table_cap = 1U << 20U)
{
    check_same_group(tau.group(), sigma.group());
    if (!(tau.field() == sigma.field())) {
        throw mismatch_error("automata over different fields");
    }
    if (tau.dimension() != sigma.dimension()) {
        throw mismatch_error("automata with different alphabet dimensions");
    }
    if (tau.is_linear() && sigma.is_linear()) {
        return psi(tau.linear().symbol * sigma.linear().symbol);
    }
    if (!tau.is_table() && !sigma.is_table()) {
        auto a = tau.is_polynomial() ? tau.polynomial().alpha : linear_to_polynomial(tau.linear());
        auto b = sigma.is_polynomial() ? sigma.polynomial().alpha : linear_to_polynomial(sigma.linear());
        return phi(star(a, b));
    }
    const auto& grp = tau.group();
    auto alphabet = detail::enumerate_alphabet(sigma, table_cap);
    auto m_tau = tau.window_memory();
    auto m = product(grp, m_tau, sigma.window_memory());
    double total = std::pow(static_cast<double>(alphabet.size()), static_cast<double>(m.size()));
    if (total > static_cast<double>(table_cap)) {
        throw unsupported_error("composite table would have too many entries");
    }
    auto rule = TableRule<F>::from_function(alphabet, m, [&](const std::vector<std::size_t>& word) {
        std::vector<CellValue<F>> vals;
        for (auto w : word) {
            vals.push_back(alphabet[w]);
        }
        Pattern<F> x(m, std::move(vals));
        auto mid = apply_window(sigma, x, WindowMode::plus, m_tau);
        auto out = tau.evaluate(mid, grp.identity());
        for (std::size_t i = 0; i < alphabet.size(); ++i) {
            if (alphabet[i] == out) {
                return i;
            }
        }
        throw unsupported_error("composite output leaves the alphabet");
    });
    return CellularAutomaton<F>(tau.group_ptr(), tau.field(), std::move(rule));
}

// ---------------------------------------------------------------------------
// Random data for probes

template <ExactField F>
typename F::element random_scalar(const F& field, std::mt19937_64& rng)
{
    if constexpr (FiniteExactField<F>) {
        return field.element_at(rng() % field.cardinality());
    } else {
        return field.from_int(static_cast<std::int64_t>(rng() % 11) - 5);
    }
}

template <ExactField F>
CellValue<F> random_value(const CellularAutomaton<F>& tau, std::mt19937_64& rng)
{
    if (tau.is_table()) {
        const auto& a = tau.table().alphabet;
        return a[rng() % a.size()];
    }
    CellValue<F> v;
    for (std::size_t i = 0; i < tau.dimension(); ++i) {
        v.push_back(random_scalar(tau.field(), rng));
    }
    return v;
}

template <ExactField F>
Pattern<F> random_pattern(const CellularAutomaton<F>& tau, const FiniteSubset& domain, std::mt19937_64& rng)
{
    std::vector<CellValue<F>> v;
    for (std::size_t i = 0; i < domain.size(); ++i) {
        v.push_back(random_value(tau, rng));
    }
    return Pattern<F>(domain, std::move(v));
}

struct MemoryReport {
    FiniteSubset set;
    bool verified = false;
    std::optional<std::string> witness; // set when a probe shows the set is not a memory set
};

/// supp(alpha) for polynomial and linear rules, checked by probes: changing
/// x at a cell outside the set never changes the output at 1_G. Table rules
/// return their declared memory set unverified.
template <ExactField F>
MemoryReport minimal_memory_set(const CellularAutomaton<F>& tau, std::size_t probes = 32, std::uint64_t seed = 1)
{
    MemoryReport r{tau.memory_set(), false, std::nullopt};
    if (tau.is_table()) {
        return r;
    }
    const auto& grp = tau.group();
    auto base = set_union(r.set, FiniteSubset{grp.identity()});
    auto around = product(grp, base, ball(grp, 1));
    auto outside = set_difference(around, r.set);
    std::mt19937_64 rng(seed);
    for (const auto& g : outside) {
        auto dom = set_union(tau.window_memory(), FiniteSubset{g});
        for (std::size_t k = 0; k < probes; ++k) {
            auto x = random_pattern(tau, dom, rng);
            auto before = tau.evaluate(x, grp.identity());
            auto i = *x.domain.index_of(g);
            x.values[i] = random_value(tau, rng);
            if (!(tau.evaluate(x, grp.identity()) == before)) {
                r.witness = "output at the identity depends on cell " + grp.format(g);
                return r;
            }
        }
    }
    r.verified = true;
    return r;
}

struct EquivarianceReport {
    bool pass = true;
    std::size_t samples = 0;
    std::optional<std::string> witness;
};

/// Checks tau(g x)(h) = tau(x)(g^-1 h) for h in B_S(1) on random g in B_S(3)
/// and random patterns x. `Map` needs group(), window_memory() and
/// evaluate(pattern, g), plus a random_value(rng) sampler.
template <class Map, class Sampler>
EquivarianceReport equivariance_check(const Map& tau, Sampler&& sample_value, std::size_t samples, std::uint64_t seed)
{
    const auto& grp = tau.group();
    std::mt19937_64 rng(seed);
    auto omega = ball(grp, 1);
    auto shifts = ball(grp, 3);
    auto om = product(grp, omega, tau.window_memory());
    EquivarianceReport rep;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto& g = shifts[rng() % shifts.size()];
        auto ginv = grp.inverse(g);
        auto dom = set_union(om, translate(grp, ginv, om));
        using P = std::decay_t<decltype(tau.evaluate(std::declval<const Pattern<typename Map::field_type>&>(), g))>;
        std::vector<P> vals;
        for (std::size_t i = 0; i < dom.size(); ++i) {
            vals.push_back(sample_value(rng));
        }
        Pattern<typename Map::field_type> x(dom, std::move(vals));
        auto gx = x.shifted(grp, g);
        ++rep.samples;
        for (const auto& h : omega) {
            auto lhs = tau.evaluate(gx, h);
            auto rhs = tau.evaluate(x, grp.multiply(ginv, h));
            if (!(lhs == rhs)) {
                rep.pass = false;
                rep.witness = "shift by " + grp.format(g) + " breaks equivariance at " + grp.format(h);
                return rep;
            }
        }
    }
    return rep;
}

template <ExactField F>
struct CellularAutomatonView {
    using field_type = F;
    const CellularAutomaton<F>& ca;
    const Group& group() const { return ca.group(); }
    FiniteSubset window_memory() const { return ca.window_memory(); }
    CellValue<F> evaluate(const Pattern<F>& x, const GroupElement& g) const { return ca.evaluate(x, g); }
};

template <ExactField F>
EquivarianceReport equivariance_check(const CellularAutomaton<F>& tau, std::size_t samples, std::uint64_t seed)
{
    return equivariance_check(CellularAutomatonView<F>{tau},
                              [&](std::mt19937_64& rng) { return random_value(tau, rng); }, samples, seed);
}

} // namespace nearca
