#pragma once

// The near-ring R(K,G): polynomials in variables X_g (g in G) with the
// product alpha * beta = sum_u alpha(u) prod_g (g beta)^u(g). Exponent vectors
// are finitely supported functions G -> N.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nearca/error.hpp"
#include "nearca/fields.hpp"
#include "nearca/group_ring.hpp"
#include "nearca/groups.hpp"

namespace nearca {

class ExponentVector {
public:
    using entry = std::pair<GroupElement, std::uint64_t>;

    ExponentVector() = default;

    /// Sums repeated elements and drops zero exponents.
    explicit ExponentVector(std::vector<entry> entries)
    {
        std::sort(entries.begin(), entries.end(),
                  [](const entry& a, const entry& b) { return a.first < b.first; });
        for (auto& e : entries) {
            if (!entries_.empty() && entries_.back().first == e.first) {
                entries_.back().second += e.second;
            } else {
                entries_.push_back(std::move(e));
            }
        }
        std::erase_if(entries_, [](const entry& e) { return e.second == 0; });
        recount();
    }

    /// k * 1_g
    static ExponentVector dirac(const GroupElement& g, std::uint64_t k = 1)
    {
        return ExponentVector(std::vector<entry>{{g, k}});
    }

    const std::vector<entry>& entries() const noexcept { return entries_; }
    bool is_zero() const noexcept { return entries_.empty(); }
    /// s(u) = sum_g u(g)
    std::uint64_t total_degree() const noexcept { return degree_; }

    std::uint64_t operator()(const GroupElement& g) const
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), g,
                                   [](const entry& e, const GroupElement& x) { return e.first < x; });
        return it != entries_.end() && it->first == g ? it->second : 0;
    }

    FiniteSubset support() const
    {
        std::vector<GroupElement> s;
        for (const auto& e : entries_) {
            s.push_back(e.first);
        }
        return FiniteSubset(std::move(s));
    }

    friend ExponentVector operator+(const ExponentVector& a, const ExponentVector& b)
    {
        ExponentVector r;
        std::size_t i = 0, j = 0;
        while (i < a.entries_.size() || j < b.entries_.size()) {
            if (j == b.entries_.size() || (i < a.entries_.size() && a.entries_[i].first < b.entries_[j].first)) {
                r.entries_.push_back(a.entries_[i++]);
            } else if (i == a.entries_.size() || b.entries_[j].first < a.entries_[i].first) {
                r.entries_.push_back(b.entries_[j++]);
            } else {
                r.entries_.emplace_back(a.entries_[i].first, a.entries_[i].second + b.entries_[j].second);
                ++i;
                ++j;
            }
        }
        r.degree_ = a.degree_ + b.degree_;
        return r;
    }

    /// k * u
    ExponentVector scaled(std::uint64_t k) const
    {
        if (k == 0) {
            return {};
        }
        ExponentVector r = *this;
        for (auto& e : r.entries_) {
            e.second *= k;
        }
        r.degree_ *= k;
        return r;
    }

    friend bool operator==(const ExponentVector& a, const ExponentVector& b) { return a.entries_ == b.entries_; }

    /// Canonical storage order: total degree, then the sorted sparse form.
    friend std::strong_ordering operator<=>(const ExponentVector& a, const ExponentVector& b)
    {
        if (auto c = a.degree_ <=> b.degree_; c != 0) {
            return c;
        }
        return std::lexicographical_compare_three_way(
            a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
            [](const entry& x, const entry& y) {
                if (auto c = x.first <=> y.first; c != 0) {
                    return c;
                }
                return x.second <=> y.second;
            });
    }

    std::string str(const Group& g) const
    {
        if (entries_.empty()) {
            return "0";
        }
        std::string s;
        for (const auto& [x, k] : entries_) {
            s += (s.empty() ? "" : " + ") + (k == 1 ? std::string() : std::to_string(k) + "*") + "1_" + g.format(x);
        }
        return s;
    }

private:
    friend ExponentVector shift(const Group&, const GroupElement&, const ExponentVector&);

    void recount()
    {
        degree_ = 0;
        for (const auto& e : entries_) {
            degree_ += e.second;
        }
    }

    std::vector<entry> entries_;
    std::uint64_t degree_ = 0;
};

/// (gu)(h) = u(g^-1 h), i.e. 1_h -> 1_gh
inline ExponentVector shift(const Group& grp, const GroupElement& g, const ExponentVector& u)
{
    std::vector<ExponentVector::entry> e;
    e.reserve(u.entries().size());
    for (const auto& [h, k] : u.entries()) {
        e.emplace_back(grp.multiply(g, h), k);
    }
    return ExponentVector(std::move(e));
}

/// (u * v)(g) = sum_h u(h) v(h^-1 g)
inline ExponentVector exp_convolve(const Group& grp, const ExponentVector& u, const ExponentVector& v)
{
    std::vector<ExponentVector::entry> e;
    for (const auto& [h, a] : u.entries()) {
        for (const auto& [k, b] : v.entries()) {
            e.emplace_back(grp.multiply(h, k), a * b);
        }
    }
    return ExponentVector(std::move(e));
}

// ---------------------------------------------------------------------------

struct StarOptions {
    std::size_t term_cap = 1'000'000;
};

template <ExactField F>
class NearRingElement {
public:
    using element = typename F::element;
    using map_type = std::map<ExponentVector, element>;

    NearRingElement(GroupPtr group, F field) : group_(std::move(group)), field_(std::move(field)) {}

    static NearRingElement zero(GroupPtr group, F field) { return NearRingElement(std::move(group), std::move(field)); }

    static NearRingElement constant(GroupPtr group, F field, const element& c)
    {
        NearRingElement r(std::move(group), std::move(field));
        r.add_term(ExponentVector(), c);
        return r;
    }

    static NearRingElement one(GroupPtr group, F field)
    {
        auto o = field.one();
        return constant(std::move(group), std::move(field), o);
    }

    /// X_g
    static NearRingElement variable(GroupPtr group, F field, const GroupElement& g)
    {
        NearRingElement r(std::move(group), std::move(field));
        r.group_->validate(g);
        r.add_term(ExponentVector::dirac(g), r.field_.one());
        return r;
    }

    /// X_{1_G}, the identity for the star product.
    static NearRingElement identity(GroupPtr group, F field)
    {
        auto e = group->identity();
        return variable(std::move(group), std::move(field), e);
    }

    static NearRingElement monomial(GroupPtr group, F field, ExponentVector u, const element& c)
    {
        NearRingElement r(std::move(group), std::move(field));
        for (const auto& [g, k] : u.entries()) {
            r.group_->validate(g);
        }
        r.add_term(std::move(u), c);
        return r;
    }

    const Group& group() const noexcept { return *group_; }
    const GroupPtr& group_ptr() const noexcept { return group_; }
    const F& field() const noexcept { return field_; }
    const map_type& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero()); }

    element coefficient(const ExponentVector& u) const
    {
        auto it = terms_.find(u);
        return it == terms_.end() ? field_.zero() : it->second;
    }

    element constant_term() const { return coefficient(ExponentVector()); }

    /// Sum of all coefficients, the value of alpha * 1.
    element coefficient_sum() const
    {
        element s = field_.zero();
        for (const auto& [u, c] : terms_) {
            s = s + c;
        }
        return s;
    }

    /// Union of the supports of the exponent vectors (the minimal memory set of Phi(alpha)).
    FiniteSubset support() const
    {
        std::vector<GroupElement> s;
        for (const auto& [u, c] : terms_) {
            for (const auto& [g, k] : u.entries()) {
                s.push_back(g);
            }
        }
        return FiniteSubset(std::move(s));
    }

    std::uint64_t total_degree() const
    {
        std::uint64_t d = 0;
        for (const auto& [u, c] : terms_) {
            d = std::max(d, u.total_degree());
        }
        return d;
    }

    void add_term(const ExponentVector& u, const element& c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(u, c);
        if (!inserted) {
            it->second = it->second + c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    friend NearRingElement operator+(const NearRingElement& a, const NearRingElement& b)
    {
        a.check(b);
        NearRingElement r = a;
        for (const auto& [u, c] : b.terms_) {
            r.add_term(u, c);
        }
        return r;
    }

    NearRingElement operator-() const
    {
        NearRingElement r(group_, field_);
        for (const auto& [u, c] : terms_) {
            r.terms_.emplace(u, -c);
        }
        return r;
    }

    friend NearRingElement operator-(const NearRingElement& a, const NearRingElement& b) { return a + (-b); }

    NearRingElement scaled(const element& s) const
    {
        NearRingElement r(group_, field_);
        for (const auto& [u, c] : terms_) {
            r.add_term(u, s * c);
        }
        return r;
    }

    /// Ordinary commutative polynomial product (not the star product).
    NearRingElement poly_mul(const NearRingElement& b, const StarOptions& opt = {}) const
    {
        check(b);
        NearRingElement r(group_, field_);
        for (const auto& [u, x] : terms_) {
            for (const auto& [v, y] : b.terms_) {
                r.add_term(u + v, x * y);
            }
            if (r.terms_.size() > opt.term_cap) {
                throw term_cap_exceeded("polynomial product exceeds " + std::to_string(opt.term_cap) + " terms");
            }
        }
        return r;
    }

    NearRingElement poly_pow(std::uint64_t k, const StarOptions& opt = {}) const
    {
        NearRingElement acc = one(group_, field_);
        NearRingElement base = *this;
        while (k) {
            if (k & 1U) {
                acc = acc.poly_mul(base, opt);
            }
            k >>= 1U;
            if (k) {
                base = base.poly_mul(base, opt);
            }
        }
        return acc;
    }

    /// Evaluates the polynomial at x: sum_u alpha(u) prod_g x(g)^u(g).
    element evaluate(const std::function<element(const GroupElement&)>& x) const
    {
        element s = field_.zero();
        for (const auto& [u, c] : terms_) {
            element m = c;
            for (const auto& [g, k] : u.entries()) {
                m = m * power(x(g), k);
            }
            s = s + m;
        }
        return s;
    }

    friend bool operator==(const NearRingElement& a, const NearRingElement& b)
    {
        return a.field_ == b.field_ && *a.group_ == *b.group_ && a.terms_ == b.terms_;
    }

    /// Text form accepted by the expression parser, e.g. `3*X[(1)]^2*X[(0)] + 1`.
    std::string str() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [u, c] = *it;
            std::string cs = field_.format(c);
            bool neg = !cs.empty() && cs[0] == '-';
            if (neg) {
                cs.erase(0, 1);
            }
            if (cs.find_first_of("+ ") != std::string::npos) {
                cs = "(" + cs + ")";
            }
            std::string mono;
            for (const auto& [g, k] : u.entries()) {
                mono += (mono.empty() ? "" : "*") + std::string("X[") + group_->format(g) + "]";
                if (k != 1) {
                    mono += "^" + std::to_string(k);
                }
            }
            std::string term;
            if (mono.empty()) {
                term = cs;
            } else if (cs == "1") {
                term = mono;
            } else {
                term = cs + "*" + mono;
            }
            if (out.empty()) {
                out = neg ? "-" + term : term;
            } else {
                out += neg ? " - " + term : " + " + term;
            }
        }
        return out;
    }

private:
    void check(const NearRingElement& b) const
    {
        check_same_group(*group_, *b.group_);
        if (!(field_ == b.field_)) {
            throw mismatch_error("near-ring elements over different fields");
        }
    }

    GroupPtr group_;
    F field_;
    map_type terms_;
};

/// X_h -> X_gh on every monomial.
template <ExactField F>
NearRingElement<F> shift(const GroupElement& g, const NearRingElement<F>& a)
{
    a.group().validate(g);
    NearRingElement<F> r(a.group_ptr(), a.field());
    for (const auto& [u, c] : a.terms()) {
        r.add_term(shift(a.group(), g, u), c);
    }
    return r;
}

/// alpha * beta = sum_u alpha(u) prod_g (g beta)^u(g)
template <ExactField F>
NearRingElement<F> star(const NearRingElement<F>& a, const NearRingElement<F>& b, const StarOptions& opt = {})
{
    check_same_group(a.group(), b.group());
    if (!(a.field() == b.field())) {
        throw mismatch_error("near-ring elements over different fields");
    }
    NearRingElement<F> result(a.group_ptr(), a.field());
    std::map<GroupElement, std::vector<NearRingElement<F>>> powers; // powers[g][k] = (g b)^k
    auto power_of = [&](const GroupElement& g, std::uint64_t k) -> const NearRingElement<F>& {
        auto& list = powers[g];
        if (list.empty()) {
            list.push_back(NearRingElement<F>::one(a.group_ptr(), a.field()));
            list.push_back(shift(g, b));
        }
        while (list.size() <= k) {
            list.push_back(list.back().poly_mul(list[1], opt));
        }
        return list[k];
    };
    for (const auto& [u, c] : a.terms()) {
        NearRingElement<F> prod = NearRingElement<F>::constant(a.group_ptr(), a.field(), c);
        for (const auto& [g, k] : u.entries()) {
            prod = prod.poly_mul(power_of(g, k), opt);
        }
        result = result + prod;
        if (result.size() > opt.term_cap) {
            throw term_cap_exceeded("star product exceeds " + std::to_string(opt.term_cap) + " terms");
        }
    }
    return result;
}

/// P(alpha) = c_0 + sum_{n >= 1} c_n alpha^(*n), with alpha^(*n) = alpha^(*(n-1)) * alpha.
template <ExactField F>
NearRingElement<F> polynomial_apply(const std::vector<typename F::element>& p, const NearRingElement<F>& a,
                                    const StarOptions& opt = {})
{
    if (p.empty()) {
        throw error("polynomial_apply needs at least one coefficient");
    }
    NearRingElement<F> result = NearRingElement<F>::constant(a.group_ptr(), a.field(), p[0]);
    NearRingElement<F> pw = a;
    for (std::size_t n = 1; n < p.size(); ++n) {
        if (n > 1) {
            pw = star(pw, a, opt);
        }
        result = result + pw.scaled(p[n]);
    }
    return result;
}

/// iota(sum a(g) g) = sum a(g) X_g
template <ExactField F>
NearRingElement<F> embed_group_ring(const ScalarGroupRing<F>& a)
{
    NearRingElement<F> r(a.group_ptr(), a.ring().field);
    for (const auto& [g, c] : a.terms()) {
        r.add_term(ExponentVector::dirac(g), c);
    }
    return r;
}

template <ExactField F>
NearRingElement<F> embed_group_ring(const MatrixGroupRing<F>&)
{
    throw unsupported_error("matrix coefficients do not embed into the near-ring");
}

/// j(sum A_g g) = sum_g sum_k a_k X_g^(p^k) for A_g = sum_k a_k t^k
template <ExactField F>
NearRingElement<F> embed_twisted(const TwistedGroupRingElement<F>& a)
{
    const F& field = a.ring().field;
    const std::uint64_t p = field.characteristic();
    if (p == 0) {
        throw unsupported_error("the twisted embedding needs positive characteristic");
    }
    NearRingElement<F> r(a.group_ptr(), field);
    for (const auto& [g, poly] : a.terms()) {
        std::uint64_t pk = 1;
        for (std::size_t k = 0; k < poly.coefficients().size(); ++k) {
            r.add_term(ExponentVector::dirac(g, pk), poly.coefficients()[k]);
            pk *= p;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Monomial order induced by a bi-invariant order on G: u < v iff at the
// greatest g with u(g) != v(g) we have u(g) < v(g).

class MonomialOrder {
public:
    explicit MonomialOrder(BiInvariantOrder order) : order_(std::move(order)) {}

    static MonomialOrder for_group(const Group& g) { return MonomialOrder(BiInvariantOrder::for_group(g)); }

    const BiInvariantOrder& group_order() const noexcept { return order_; }

    std::strong_ordering compare(const Group& grp, const ExponentVector& u, const ExponentVector& v) const
    {
        const auto& a = u.entries();
        const auto& b = v.entries();
        std::optional<GroupElement> top;
        std::uint64_t ua = 0, vb = 0;
        auto consider = [&](const GroupElement& g, std::uint64_t x, std::uint64_t y) {
            if (x == y) {
                return;
            }
            if (!top || order_.compare(grp, *top, g) < 0) {
                top = g;
                ua = x;
                vb = y;
            }
        };
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                consider(a[i].first, a[i].second, 0);
                ++i;
            } else if (i == a.size() || b[j].first < a[i].first) {
                consider(b[j].first, 0, b[j].second);
                ++j;
            } else {
                consider(a[i].first, a[i].second, b[j].second);
                ++i;
                ++j;
            }
        }
        if (!top) {
            return std::strong_ordering::equal;
        }
        return ua <=> vb;
    }

    bool less(const Group& grp, const ExponentVector& u, const ExponentVector& v) const
    {
        return compare(grp, u, v) < 0;
    }

private:
    BiInvariantOrder order_;
};

template <ExactField F>
struct LeadingTerm {
    typename F::element coefficient;
    ExponentVector exponent;
};

template <ExactField F>
LeadingTerm<F> leading_term(const NearRingElement<F>& a, const MonomialOrder& order)
{
    if (a.is_zero()) {
        throw error("the zero polynomial has no leading term");
    }
    auto best = a.terms().begin();
    for (auto it = std::next(best); it != a.terms().end(); ++it) {
        if (order.less(a.group(), best->first, it->first)) {
            best = it;
        }
    }
    return {best->second, best->first};
}

} // namespace nearca
