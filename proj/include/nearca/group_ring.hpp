#pragma once

// Group rings R[G] with R a field, a matrix ring Mat_n(K) or a twisted
// polynomial ring K[t; F]. Elements are sparse maps G -> R without zero
// coefficients.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nearca/error.hpp"
#include "nearca/fields.hpp"
#include "nearca/groups.hpp"
#include "nearca/matrix.hpp"
#include "nearca/twisted.hpp"

namespace nearca {

template <class R>
concept CoefficientRing = requires(const R& r, const typename R::value& a) {
    { r.zero() } -> std::same_as<typename R::value>;
    { r.one() } -> std::same_as<typename R::value>;
    { r.is_zero(a) } -> std::same_as<bool>;
    { r.add(a, a) } -> std::same_as<typename R::value>;
    { r.mul(a, a) } -> std::same_as<typename R::value>;
    { r.neg(a) } -> std::same_as<typename R::value>;
    { r.format(a) } -> std::convertible_to<std::string>;
};

template <ExactField F>
struct ScalarRing {
    using field_type = F;
    using value = typename F::element;
    F field;

    value zero() const { return field.zero(); }
    value one() const { return field.one(); }
    bool is_zero(const value& a) const { return a.is_zero(); }
    value add(const value& a, const value& b) const { return a + b; }
    value mul(const value& a, const value& b) const { return a * b; }
    value neg(const value& a) const { return -a; }
    std::string format(const value& a) const { return field.format(a); }
    void check(const value&) const {}
    friend bool operator==(const ScalarRing& a, const ScalarRing& b) { return a.field == b.field; }
};

template <ExactField F>
struct MatrixRing {
    using field_type = F;
    using value = Matrix<F>;
    F field;
    std::size_t n = 1;

    value zero() const { return Matrix<F>(field, n, n); }
    value one() const { return Matrix<F>::identity(field, n); }
    bool is_zero(const value& a) const { return a.is_zero(); }
    value add(const value& a, const value& b) const { return a + b; }
    value mul(const value& a, const value& b) const { return a * b; }
    value neg(const value& a) const { return -a; }
    std::string format(const value& a) const { return a.str(); }
    void check(const value& a) const
    {
        if (a.rows() != n || a.cols() != n) {
            throw mismatch_error("matrix coefficient of shape " + a.shape() + " in Mat_" + std::to_string(n));
        }
    }
    friend bool operator==(const MatrixRing& a, const MatrixRing& b) { return a.field == b.field && a.n == b.n; }
};

template <ExactField F>
struct TwistedRing {
    using field_type = F;
    using value = TwistedPoly<F>;
    F field;

    value zero() const { return TwistedPoly<F>(field); }
    value one() const { return TwistedPoly<F>::constant(field, field.one()); }
    bool is_zero(const value& a) const { return a.is_zero(); }
    value add(const value& a, const value& b) const { return a + b; }
    value mul(const value& a, const value& b) const { return a * b; }
    value neg(const value& a) const { return -a; }
    std::string format(const value& a) const { return a.str(); }
    void check(const value&) const {}
    friend bool operator==(const TwistedRing& a, const TwistedRing& b) { return a.field == b.field; }
};

template <CoefficientRing R>
class GroupRingElement {
public:
    using value = typename R::value;
    using map_type = std::map<GroupElement, value>;

    GroupRingElement(GroupPtr group, R ring) : group_(std::move(group)), ring_(std::move(ring)) {}

    static GroupRingElement zero(GroupPtr group, R ring) { return GroupRingElement(std::move(group), std::move(ring)); }

    static GroupRingElement one(GroupPtr group, R ring)
    {
        GroupRingElement e(group, ring);
        e.set(group->identity(), ring.one());
        return e;
    }

    /// a * g
    static GroupRingElement monomial(GroupPtr group, R ring, const GroupElement& g, value a)
    {
        GroupRingElement e(std::move(group), std::move(ring));
        e.set(g, std::move(a));
        return e;
    }

    const Group& group() const noexcept { return *group_; }
    const GroupPtr& group_ptr() const noexcept { return group_; }
    const R& ring() const noexcept { return ring_; }
    const map_type& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    value coefficient(const GroupElement& g) const
    {
        auto it = terms_.find(g);
        return it == terms_.end() ? ring_.zero() : it->second;
    }

    /// Sets the coefficient of g; zero removes the term.
    void set(const GroupElement& g, value a)
    {
        group_->validate(g);
        ring_.check(a);
        if (ring_.is_zero(a)) {
            terms_.erase(g);
        } else {
            terms_.insert_or_assign(g, std::move(a));
        }
    }

    void add_term(const GroupElement& g, const value& a)
    {
        auto it = terms_.find(g);
        if (it == terms_.end()) {
            set(g, a);
        } else {
            set(g, ring_.add(it->second, a));
        }
    }

    FiniteSubset support() const
    {
        std::vector<GroupElement> s;
        for (const auto& [g, a] : terms_) {
            s.push_back(g);
        }
        return FiniteSubset(std::move(s));
    }

    friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b)
    {
        a.check(b);
        GroupRingElement r = a;
        for (const auto& [g, c] : b.terms_) {
            r.add_term(g, c);
        }
        return r;
    }

    GroupRingElement operator-() const
    {
        GroupRingElement r(group_, ring_);
        for (const auto& [g, c] : terms_) {
            r.terms_.emplace(g, ring_.neg(c));
        }
        return r;
    }

    friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) { return a + (-b); }

    /// (ab)(t) = sum_h a(h) b(h^-1 t)
    friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b)
    {
        a.check(b);
        GroupRingElement r(a.group_, a.ring_);
        for (const auto& [g, x] : a.terms_) {
            for (const auto& [h, y] : b.terms_) {
                r.add_term(a.group_->multiply_unchecked(g, h), a.ring_.mul(x, y));
            }
        }
        return r;
    }

    friend bool operator==(const GroupRingElement& a, const GroupRingElement& b)
    {
        if (!(a.ring_ == b.ring_) || !(*a.group_ == *b.group_) || a.terms_.size() != b.terms_.size()) {
            return false;
        }
        auto it = b.terms_.begin();
        for (const auto& [g, x] : a.terms_) {
            if (!(g == it->first) || !(x == it->second)) {
                return false;
            }
            ++it;
        }
        return true;
    }

    /// `1 + 2*[1]` style text; coefficients that are not plain scalars are wrapped in braces.
    std::string str() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        for (const auto& [g, c] : terms_) {
            std::string cs = ring_.format(c);
            bool neg = cs.size() > 1 && cs[0] == '-' && cs.find_first_of(" +-[", 1) == std::string::npos;
            if (neg) {
                cs.erase(0, 1);
            }
            if (!out.empty()) {
                out += neg ? " - " : " + ";
            } else if (neg) {
                out += "-";
            }
            if (cs.find_first_of("[") != std::string::npos) {
                cs = "{" + cs + "}";
            } else if (cs.find_first_of(" +-", 1) != std::string::npos) {
                cs = "(" + cs + ")";
            }
            if (group_->is_identity(g)) {
                out += cs;
            } else if (cs == "1") {
                out += "[" + group_->format(g) + "]";
            } else {
                out += cs + "*[" + group_->format(g) + "]";
            }
        }
        return out;
    }

private:
    void check(const GroupRingElement& b) const
    {
        check_same_group(*group_, *b.group_);
        if (!(ring_ == b.ring_)) {
            throw mismatch_error("group ring elements over different coefficient rings");
        }
    }

    GroupPtr group_;
    R ring_;
    map_type terms_;
};

template <CoefficientRing R>
GroupRingElement<R> gr_convolve(const GroupRingElement<R>& a, const GroupRingElement<R>& b)
{
    return a * b;
}

template <ExactField F>
using ScalarGroupRing = GroupRingElement<ScalarRing<F>>;
template <ExactField F>
using MatrixGroupRing = GroupRingElement<MatrixRing<F>>;
template <ExactField F>
using TwistedGroupRingElement = GroupRingElement<TwistedRing<F>>;

template <ExactField F>
using GroupRingMatrix = std::vector<std::vector<ScalarGroupRing<F>>>;

/// T(sum A(g) g) = (sum A(g)_ij g)_ij
template <ExactField F>
GroupRingMatrix<F> mat_transport(const MatrixGroupRing<F>& a)
{
    const std::size_t n = a.ring().n;
    ScalarRing<F> sr{a.ring().field};
    GroupRingMatrix<F> out(n, std::vector<ScalarGroupRing<F>>(n, ScalarGroupRing<F>(a.group_ptr(), sr)));
    for (const auto& [g, m] : a.terms()) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                out[i][j].add_term(g, m(i, j));
            }
        }
    }
    return out;
}

template <ExactField F>
MatrixGroupRing<F> mat_transport_inverse(const GroupRingMatrix<F>& m)
{
    if (m.empty() || m[0].empty()) {
        throw error("empty group-ring matrix");
    }
    const std::size_t n = m.size();
    const auto& any = m[0][0];
    MatrixRing<F> mr{any.ring().field, n};
    MatrixGroupRing<F> out(any.group_ptr(), mr);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) {
            throw mismatch_error("group-ring matrix is not square");
        }
        for (std::size_t j = 0; j < n; ++j) {
            for (const auto& [g, c] : m[i][j].terms()) {
                Matrix<F> e(mr.field, n, n);
                e(i, j) = c;
                out.add_term(g, e);
            }
        }
    }
    return out;
}

template <ExactField F>
GroupRingMatrix<F> multiply(const GroupRingMatrix<F>& a, const GroupRingMatrix<F>& b)
{
    const std::size_t n = a.size();
    if (b.size() != n) {
        throw mismatch_error("group-ring matrices of different sizes");
    }
    GroupRingMatrix<F> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<ScalarGroupRing<F>> row;
        for (std::size_t j = 0; j < n; ++j) {
            ScalarGroupRing<F> acc(a[i][0].group_ptr(), a[i][0].ring());
            for (std::size_t k = 0; k < n; ++k) {
                acc = acc + a[i][k] * b[k][j];
            }
            row.push_back(std::move(acc));
        }
        out.push_back(std::move(row));
    }
    return out;
}

enum class InverseVerdict { not_one_sided, two_sided, direct_finiteness_violation };

inline std::string to_string(InverseVerdict v)
{
    switch (v) {
    case InverseVerdict::not_one_sided:
        return "NotOneSided";
    case InverseVerdict::two_sided:
        return "TwoSided";
    case InverseVerdict::direct_finiteness_violation:
        return "DirectFinitenessViolation";
    }
    return {};
}

template <CoefficientRing R>
struct InverseAudit {
    InverseVerdict verdict;
    GroupRingElement<R> ab;
    GroupRingElement<R> ba;
};

/// If ab = 1, checks that ba = 1 as well; ba is kept as the witness.
template <CoefficientRing R>
InverseAudit<R> one_sided_inverse_audit(const GroupRingElement<R>& a, const GroupRingElement<R>& b)
{
    auto ab = a * b;
    auto ba = b * a;
    auto one = GroupRingElement<R>::one(a.group_ptr(), a.ring());
    InverseVerdict v = InverseVerdict::not_one_sided;
    if (ab == one) {
        v = ba == one ? InverseVerdict::two_sided : InverseVerdict::direct_finiteness_violation;
    }
    return {v, std::move(ab), std::move(ba)};
}

} // namespace nearca
