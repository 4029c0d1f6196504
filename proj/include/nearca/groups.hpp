#pragma once

// Finitely generated groups with canonical element forms: free abelian groups
// Z^d (integer vectors), free groups (reduced words) and finite groups given by
// a multiplication table (indices). Also word metrics, finite-subset calculus
// and the bi-invariant orders used by the monomial order of the near-ring.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "nearca/error.hpp"

namespace nearca {

enum class GroupKind { free_abelian, free, finite };

/// Canonical form of a group element. Interpretation depends on the group:
/// coordinates for Z^d, letters +-(i+1) for a free word, {index} for finite.
class GroupElement {
public:
    using storage = boost::container::small_vector<std::int64_t, 3>;

    GroupElement() = default;
    explicit GroupElement(storage d) : data_(std::move(d)) {}
    GroupElement(std::initializer_list<std::int64_t> d) : data_(d) {}

    const storage& data() const noexcept { return data_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::int64_t operator[](std::size_t i) const { return data_[i]; }

    friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.data_ == b.data_; }
    friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b)
    {
        return std::lexicographical_compare_three_way(a.data_.begin(), a.data_.end(), b.data_.begin(),
                                                      b.data_.end());
    }

private:
    storage data_;
};

class Group;
using GroupPtr = std::shared_ptr<const Group>;

class Group {
public:
    static GroupPtr free_abelian(std::size_t d)
    {
        auto g = std::shared_ptr<Group>(new Group(GroupKind::free_abelian, d));
        for (std::size_t i = 0; i < d; ++i) {
            GroupElement::storage plus(d, 0), minus(d, 0);
            plus[i] = 1;
            minus[i] = -1;
            g->gens_.emplace_back(plus);
            g->gens_.emplace_back(minus);
        }
        return g;
    }

    static GroupPtr free(std::size_t k)
    {
        if (k == 0 || k > 26) {
            throw error("free group rank must be in 1..26");
        }
        auto g = std::shared_ptr<Group>(new Group(GroupKind::free, k));
        for (std::size_t i = 0; i < k; ++i) {
            auto l = static_cast<std::int64_t>(i + 1);
            g->gens_.push_back(GroupElement{l});
            g->gens_.push_back(GroupElement{-l});
        }
        return g;
    }

    /// Finite group from a Cayley table `table[a][b] = a*b`. The generating
    /// list is closed under inverses (each generator followed by its inverse
    /// unless it is an involution). Axioms are checked here.
    static GroupPtr finite(std::vector<std::vector<std::uint32_t>> table, std::vector<std::uint32_t> generators = {})
    {
        const std::size_t n = table.size();
        if (n == 0) {
            throw error("empty multiplication table");
        }
        for (const auto& row : table) {
            if (row.size() != n) {
                throw error("multiplication table is not square");
            }
            for (auto v : row) {
                if (v >= n) {
                    throw error("multiplication table entry out of range");
                }
            }
        }
        std::optional<std::uint32_t> e;
        for (std::uint32_t c = 0; c < n && !e; ++c) {
            bool ok = true;
            for (std::uint32_t x = 0; x < n && ok; ++x) {
                ok = table[c][x] == x && table[x][c] == x;
            }
            if (ok) {
                e = c;
            }
        }
        if (!e) {
            throw error("multiplication table has no identity");
        }
        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::uint32_t b = 0; b < n; ++b) {
                for (std::uint32_t c = 0; c < n; ++c) {
                    if (table[table[a][b]][c] != table[a][table[b][c]]) {
                        throw error("multiplication table is not associative");
                    }
                }
            }
        }
        std::vector<std::uint32_t> inv(n, static_cast<std::uint32_t>(n));
        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::uint32_t b = 0; b < n; ++b) {
                if (table[a][b] == *e && table[b][a] == *e) {
                    inv[a] = b;
                }
            }
            if (inv[a] == n) {
                throw error("element #" + std::to_string(a) + " has no inverse");
            }
        }
        auto g = std::shared_ptr<Group>(new Group(GroupKind::finite, n));
        g->table_ = std::make_shared<const std::vector<std::vector<std::uint32_t>>>(std::move(table));
        g->finite_inverse_ = std::move(inv);
        g->identity_index_ = *e;
        if (generators.empty()) {
            for (std::uint32_t a = 0; a < n; ++a) {
                if (a != *e) {
                    generators.push_back(a);
                }
            }
        }
        std::vector<std::uint32_t> sym;
        for (auto s : generators) {
            if (s >= n) {
                throw error("generator out of range");
            }
            if (std::find(sym.begin(), sym.end(), s) != sym.end()) {
                continue;
            }
            sym.push_back(s);
            auto si = g->finite_inverse_[s];
            if (std::find(sym.begin(), sym.end(), si) == sym.end()) {
                sym.push_back(si);
            }
        }
        for (auto s : sym) {
            g->gens_.push_back(GroupElement{static_cast<std::int64_t>(s)});
        }
        return g;
    }

    /// Z/n with generators {1, n-1}.
    static GroupPtr cyclic(std::uint32_t n)
    {
        std::vector<std::vector<std::uint32_t>> t(n, std::vector<std::uint32_t>(n));
        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::uint32_t b = 0; b < n; ++b) {
                t[a][b] = (a + b) % n;
            }
        }
        return finite(std::move(t), n > 1 ? std::vector<std::uint32_t>{1} : std::vector<std::uint32_t>{});
    }

    GroupKind kind() const noexcept { return kind_; }
    /// d for Z^d, k for free groups of rank k, the order for finite groups.
    std::size_t rank() const noexcept { return rank_; }
    bool is_orderable() const noexcept { return kind_ != GroupKind::finite || rank_ == 1; }

    GroupElement identity() const
    {
        switch (kind_) {
        case GroupKind::free_abelian:
            return GroupElement(GroupElement::storage(rank_, 0));
        case GroupKind::free:
            return GroupElement{};
        case GroupKind::finite:
            return GroupElement{static_cast<std::int64_t>(identity_index_)};
        }
        return {};
    }

    bool is_identity(const GroupElement& g) const { return g == identity(); }

    GroupElement multiply(const GroupElement& g, const GroupElement& h) const
    {
        validate(g);
        validate(h);
        return multiply_unchecked(g, h);
    }

    GroupElement multiply_unchecked(const GroupElement& g, const GroupElement& h) const
    {
        switch (kind_) {
        case GroupKind::free_abelian: {
            GroupElement::storage r(rank_);
            for (std::size_t i = 0; i < rank_; ++i) {
                r[i] = g[i] + h[i];
            }
            return GroupElement(std::move(r));
        }
        case GroupKind::free: {
            GroupElement::storage r(g.data().begin(), g.data().end());
            for (auto l : h.data()) {
                if (!r.empty() && r.back() == -l) {
                    r.pop_back();
                } else {
                    r.push_back(l);
                }
            }
            return GroupElement(std::move(r));
        }
        case GroupKind::finite:
            return GroupElement{static_cast<std::int64_t>(
                (*table_)[static_cast<std::size_t>(g[0])][static_cast<std::size_t>(h[0])])};
        }
        return {};
    }

    GroupElement inverse(const GroupElement& g) const
    {
        validate(g);
        switch (kind_) {
        case GroupKind::free_abelian: {
            GroupElement::storage r(rank_);
            for (std::size_t i = 0; i < rank_; ++i) {
                r[i] = -g[i];
            }
            return GroupElement(std::move(r));
        }
        case GroupKind::free: {
            GroupElement::storage r;
            for (auto it = g.data().rbegin(); it != g.data().rend(); ++it) {
                r.push_back(-*it);
            }
            return GroupElement(std::move(r));
        }
        case GroupKind::finite:
            return GroupElement{static_cast<std::int64_t>(finite_inverse_[static_cast<std::size_t>(g[0])])};
        }
        return {};
    }

    /// g^n for any integer n.
    GroupElement power(const GroupElement& g, std::int64_t n) const
    {
        GroupElement base = n < 0 ? inverse(g) : g;
        GroupElement acc = identity();
        for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) {
            acc = multiply_unchecked(acc, base);
        }
        return acc;
    }

    /// Throws mismatch_error when `g` is not a canonical element of this group.
    void validate(const GroupElement& g) const
    {
        switch (kind_) {
        case GroupKind::free_abelian:
            if (g.size() != rank_) {
                throw mismatch_error("element of rank " + std::to_string(g.size()) + " used in Z^" +
                                     std::to_string(rank_));
            }
            return;
        case GroupKind::free:
            for (std::size_t i = 0; i < g.size(); ++i) {
                auto l = g[i];
                if (l == 0 || l > static_cast<std::int64_t>(rank_) || -l > static_cast<std::int64_t>(rank_)) {
                    throw mismatch_error("letter outside the free group's alphabet");
                }
                if (i > 0 && g[i - 1] == -l) {
                    throw mismatch_error("free group word is not reduced");
                }
            }
            return;
        case GroupKind::finite:
            if (g.size() != 1 || g[0] < 0 || g[0] >= static_cast<std::int64_t>(rank_)) {
                throw mismatch_error("not an element of the finite group of order " + std::to_string(rank_));
            }
            return;
        }
    }

    /// Symmetric generating list; generator i has its inverse at generator_inverse(i).
    const std::vector<GroupElement>& generators() const noexcept { return gens_; }

    std::size_t generator_inverse(std::size_t i) const
    {
        GroupElement inv = inverse(gens_[i]);
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            if (gens_[j] == inv) {
                return j;
            }
        }
        throw error("generating set is not symmetric");
    }

    std::optional<std::size_t> generator_index(const GroupElement& s) const
    {
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            if (gens_[j] == s) {
                return j;
            }
        }
        return std::nullopt;
    }

    /// Word length with respect to the generating list.
    std::uint64_t word_length(const GroupElement& g) const
    {
        validate(g);
        switch (kind_) {
        case GroupKind::free_abelian: {
            std::uint64_t s = 0;
            for (auto c : g.data()) {
                s += static_cast<std::uint64_t>(c < 0 ? -c : c);
            }
            return s;
        }
        case GroupKind::free:
            return g.size();
        case GroupKind::finite: {
            const auto& d = finite_distances();
            return d[static_cast<std::size_t>(g[0])];
        }
        }
        return 0;
    }

    std::uint64_t distance(const GroupElement& g, const GroupElement& h) const
    {
        return word_length(multiply(inverse(g), h));
    }

    std::string format(const GroupElement& g) const
    {
        switch (kind_) {
        case GroupKind::free_abelian: {
            std::string s = "(";
            for (std::size_t i = 0; i < g.size(); ++i) {
                s += (i ? "," : "") + std::to_string(g[i]);
            }
            return s + ")";
        }
        case GroupKind::free: {
            if (g.size() == 0) {
                return "1";
            }
            std::string s;
            std::size_t i = 0;
            while (i < g.size()) {
                std::size_t j = i;
                while (j < g.size() && g[j] == g[i]) {
                    ++j;
                }
                auto letter = static_cast<char>('a' + (g[i] < 0 ? -g[i] : g[i]) - 1);
                auto exp = static_cast<std::int64_t>(j - i) * (g[i] < 0 ? -1 : 1);
                s += (i ? "*" : "") + std::string(1, letter);
                if (exp != 1) {
                    s += "^" + std::to_string(exp);
                }
                i = j;
            }
            return s;
        }
        case GroupKind::finite:
            return "#" + std::to_string(g[0]);
        }
        return {};
    }

    GroupElement parse(std::string_view text) const;

    /// Text descriptor: `zd:2`, `free:2`, `finite:<order>`.
    std::string descriptor() const
    {
        switch (kind_) {
        case GroupKind::free_abelian:
            return "zd:" + std::to_string(rank_);
        case GroupKind::free:
            return "free:" + std::to_string(rank_);
        case GroupKind::finite:
            return "finite:" + std::to_string(rank_);
        }
        return {};
    }

    const std::vector<std::vector<std::uint32_t>>* table() const { return table_.get(); }

    friend bool operator==(const Group& a, const Group& b)
    {
        if (a.kind_ != b.kind_ || a.rank_ != b.rank_ || a.gens_ != b.gens_) {
            return false;
        }
        return a.kind_ != GroupKind::finite || *a.table_ == *b.table_;
    }

private:
    Group(GroupKind kind, std::size_t rank) : kind_(kind), rank_(rank) {}

    const std::vector<std::uint64_t>& finite_distances() const
    {
        std::call_once(*dist_once_, [this] {
            std::vector<std::uint64_t> d(rank_, UINT64_MAX);
            std::deque<std::uint32_t> q;
            d[identity_index_] = 0;
            q.push_back(identity_index_);
            while (!q.empty()) {
                auto a = q.front();
                q.pop_front();
                for (const auto& s : gens_) {
                    auto b = (*table_)[a][static_cast<std::size_t>(s[0])];
                    if (d[b] == UINT64_MAX) {
                        d[b] = d[a] + 1;
                        q.push_back(b);
                    }
                }
            }
            dist_ = std::move(d);
        });
        return dist_;
    }

    GroupKind kind_;
    std::size_t rank_;
    std::vector<GroupElement> gens_;
    std::shared_ptr<const std::vector<std::vector<std::uint32_t>>> table_;
    std::vector<std::uint32_t> finite_inverse_;
    std::uint32_t identity_index_ = 0;
    mutable std::shared_ptr<std::once_flag> dist_once_ = std::make_shared<std::once_flag>();
    mutable std::vector<std::uint64_t> dist_;
};

inline void check_same_group(const Group& a, const Group& b)
{
    if (&a != &b && !(a == b)) {
        throw mismatch_error("operands belong to different groups (" + a.descriptor() + " vs " + b.descriptor() +
                             ")");
    }
}

inline GroupElement Group::parse(std::string_view text) const
{
    std::string s;
    for (char c : text) {
        if (c != ' ' && c != '\t') {
            s += c;
        }
    }
    auto fail = [&](const std::string& what, std::size_t pos) -> GroupElement {
        throw parse_error(what + " in group element '" + s + "' for " + descriptor(), pos);
    };
    auto parse_int = [&](std::size_t& i) -> std::int64_t {
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
            neg = s[i] == '-';
            ++i;
        }
        std::size_t st = i;
        std::int64_t v = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            v = v * 10 + (s[i] - '0');
            ++i;
        }
        if (i == st) {
            fail("expected an integer", i);
        }
        return neg ? -v : v;
    };
    switch (kind_) {
    case GroupKind::free_abelian: {
        GroupElement::storage v;
        std::size_t i = 0;
        if (!s.empty() && s[0] == '(') {
            ++i;
            if (i < s.size() && s[i] == ')') {
                ++i;
            } else {
                while (true) {
                    v.push_back(parse_int(i));
                    if (i < s.size() && s[i] == ',') {
                        ++i;
                        continue;
                    }
                    if (i < s.size() && s[i] == ')') {
                        ++i;
                        break;
                    }
                    fail("expected ',' or ')'", i);
                }
            }
        } else if (rank_ == 1) {
            v.push_back(parse_int(i));
        } else {
            fail("expected '('", 0);
        }
        if (i != s.size()) {
            fail("trailing characters", i);
        }
        if (v.size() != rank_) {
            fail("wrong number of coordinates", 0);
        }
        return GroupElement(std::move(v));
    }
    case GroupKind::free: {
        GroupElement acc = identity();
        if (s == "1" || s == "e" || s.empty()) {
            return acc;
        }
        std::size_t i = 0;
        while (i < s.size()) {
            char c = s[i];
            if (c < 'a' || c >= static_cast<char>('a' + rank_)) {
                fail("unknown generator", i);
            }
            ++i;
            std::int64_t exp = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                exp = parse_int(i);
            }
            GroupElement letter{static_cast<std::int64_t>(c - 'a' + 1)};
            acc = multiply_unchecked(acc, power(letter, exp));
            if (i < s.size()) {
                if (s[i] != '*') {
                    fail("expected '*'", i);
                }
                ++i;
            }
        }
        return acc;
    }
    case GroupKind::finite: {
        std::size_t i = 0;
        if (!s.empty() && s[0] == '#') {
            ++i;
        }
        std::int64_t v = parse_int(i);
        if (i != s.size()) {
            fail("trailing characters", i);
        }
        GroupElement g{v};
        validate(g);
        return g;
    }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Finite subsets with deterministic (canonical-form) order.

class FiniteSubset {
public:
    FiniteSubset() = default;
    explicit FiniteSubset(std::vector<GroupElement> elems) : elems_(std::move(elems))
    {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    }
    FiniteSubset(std::initializer_list<GroupElement> elems) : FiniteSubset(std::vector<GroupElement>(elems)) {}

    std::size_t size() const noexcept { return elems_.size(); }
    bool empty() const noexcept { return elems_.empty(); }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }
    const GroupElement& operator[](std::size_t i) const { return elems_[i]; }
    const std::vector<GroupElement>& elements() const noexcept { return elems_; }

    bool contains(const GroupElement& g) const { return std::binary_search(elems_.begin(), elems_.end(), g); }

    std::optional<std::size_t> index_of(const GroupElement& g) const
    {
        auto it = std::lower_bound(elems_.begin(), elems_.end(), g);
        if (it == elems_.end() || !(*it == g)) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - elems_.begin());
    }

    bool is_subset_of(const FiniteSubset& o) const
    {
        return std::includes(o.elems_.begin(), o.elems_.end(), elems_.begin(), elems_.end());
    }

    friend FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b)
    {
        std::vector<GroupElement> out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return FiniteSubset(std::move(out));
    }
    friend FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b)
    {
        std::vector<GroupElement> out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return FiniteSubset(std::move(out));
    }
    friend FiniteSubset set_intersection(const FiniteSubset& a, const FiniteSubset& b)
    {
        std::vector<GroupElement> out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return FiniteSubset(std::move(out));
    }
    friend bool operator==(const FiniteSubset& a, const FiniteSubset& b) { return a.elems_ == b.elems_; }

private:
    std::vector<GroupElement> elems_;
};

/// {ab : a in A, b in B}
inline FiniteSubset product(const Group& g, const FiniteSubset& a, const FiniteSubset& b)
{
    std::vector<GroupElement> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) {
            out.push_back(g.multiply(x, y));
        }
    }
    return FiniteSubset(std::move(out));
}

inline FiniteSubset translate(const Group& g, const GroupElement& by, const FiniteSubset& a)
{
    std::vector<GroupElement> out;
    for (const auto& x : a) {
        out.push_back(g.multiply(by, x));
    }
    return FiniteSubset(std::move(out));
}

inline FiniteSubset inverse_set(const Group& g, const FiniteSubset& a)
{
    std::vector<GroupElement> out;
    for (const auto& x : a) {
        out.push_back(g.inverse(x));
    }
    return FiniteSubset(std::move(out));
}

/// B_S(r) by breadth-first search in the Cayley graph.
inline FiniteSubset ball(const Group& g, std::uint64_t r)
{
    std::set<GroupElement> seen{g.identity()};
    std::vector<GroupElement> frontier{g.identity()};
    for (std::uint64_t step = 0; step < r && !frontier.empty(); ++step) {
        std::vector<GroupElement> next;
        for (const auto& x : frontier) {
            for (const auto& s : g.generators()) {
                auto y = g.multiply_unchecked(x, s);
                if (seen.insert(y).second) {
                    next.push_back(std::move(y));
                }
            }
        }
        frontier = std::move(next);
    }
    return FiniteSubset(std::vector<GroupElement>(seen.begin(), seen.end()));
}

struct WindowSets {
    FiniteSubset interior;     // {g : gM subset of Omega}
    FiniteSubset neighborhood; // Omega M
    FiniteSubset boundary;     // neighborhood \ interior
};

inline FiniteSubset interior(const Group& g, const FiniteSubset& omega, const FiniteSubset& m)
{
    if (m.empty()) {
        throw error("the interior for an empty memory set is the whole group");
    }
    // every g with gM in Omega is of the form omega * m0^-1
    GroupElement m0inv = g.inverse(m[0]);
    std::vector<GroupElement> out;
    for (const auto& w : omega) {
        GroupElement cand = g.multiply(w, m0inv);
        bool ok = true;
        for (const auto& x : m) {
            if (!omega.contains(g.multiply(cand, x))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.push_back(std::move(cand));
        }
    }
    return FiniteSubset(std::move(out));
}

inline WindowSets subset_calculus(const Group& g, const FiniteSubset& omega, const FiniteSubset& m)
{
    WindowSets w;
    w.interior = interior(g, omega, m);
    w.neighborhood = product(g, omega, m);
    w.boundary = set_difference(w.neighborhood, w.interior);
    return w;
}

/// The box [lo, hi)^d in Z^d.
inline FiniteSubset box(const Group& g, std::int64_t lo, std::int64_t hi)
{
    if (g.kind() != GroupKind::free_abelian) {
        throw unsupported_error("boxes exist only in Z^d");
    }
    std::vector<GroupElement> out;
    const std::size_t d = g.rank();
    if (hi <= lo) {
        return {};
    }
    GroupElement::storage cur(d, lo);
    while (true) {
        out.emplace_back(cur);
        std::size_t i = d;
        while (i > 0) {
            --i;
            if (++cur[i] < hi) {
                break;
            }
            cur[i] = lo;
            if (i == 0) {
                return FiniteSubset(std::move(out));
            }
        }
        if (d == 0) {
            return FiniteSubset(std::move(out));
        }
    }
}

/// F_i = [0, i)^d, a Folner sequence of Z^d.
inline FiniteSubset folner_set(const Group& g, std::size_t i)
{
    if (g.kind() != GroupKind::free_abelian) {
        throw unsupported_error("Folner boxes are only provided for Z^d");
    }
    if (i == 0) {
        throw error("Folner index must be >= 1");
    }
    return box(g, 0, static_cast<std::int64_t>(i));
}

// ---------------------------------------------------------------------------
// Bi-invariant total orders.

class BiInvariantOrder {
public:
    enum class Kind { lex_zd, magnus_free };

    /// Lexicographic order on Z^d; `priority` lists coordinates from most to least significant.
    static BiInvariantOrder lex(std::vector<std::size_t> priority = {})
    {
        BiInvariantOrder o;
        o.kind_ = Kind::lex_zd;
        o.priority_ = std::move(priority);
        return o;
    }

    /// Magnus order on a free group with truncation cap `d_max`.
    static BiInvariantOrder magnus(std::size_t d_max = 16)
    {
        BiInvariantOrder o;
        o.kind_ = Kind::magnus_free;
        o.d_max_ = d_max;
        return o;
    }

    /// The default order for an orderable group kind.
    static BiInvariantOrder for_group(const Group& g)
    {
        switch (g.kind()) {
        case GroupKind::free_abelian:
            return lex();
        case GroupKind::free:
            return magnus();
        case GroupKind::finite:
            if (g.rank() == 1) {
                return lex();
            }
            break;
        }
        throw unsupported_error("finite nontrivial groups are not orderable");
    }

    BiInvariantOrder reversed() const
    {
        BiInvariantOrder o = *this;
        o.reversed_ = !reversed_;
        return o;
    }

    Kind kind() const noexcept { return kind_; }
    bool is_reversed() const noexcept { return reversed_; }
    std::size_t d_max() const noexcept { return d_max_; }

    std::strong_ordering compare(const Group& g, const GroupElement& a, const GroupElement& b) const
    {
        g.validate(a);
        g.validate(b);
        std::strong_ordering r = std::strong_ordering::equal;
        if (g.kind() == GroupKind::finite && g.rank() == 1) {
            return r;
        }
        if (kind_ == Kind::lex_zd) {
            if (g.kind() != GroupKind::free_abelian) {
                throw mismatch_error("lexicographic order needs Z^d");
            }
            r = compare_lex(g, a, b);
        } else {
            if (g.kind() != GroupKind::free) {
                throw mismatch_error("Magnus order needs a free group");
            }
            r = compare_magnus(g, a, b);
        }
        if (reversed_) {
            return 0 <=> r;
        }
        return r;
    }

    bool less(const Group& g, const GroupElement& a, const GroupElement& b) const { return compare(g, a, b) < 0; }

private:
    std::strong_ordering compare_lex(const Group& g, const GroupElement& a, const GroupElement& b) const
    {
        const std::size_t d = g.rank();
        if (!priority_.empty() && priority_.size() != d) {
            throw mismatch_error("priority permutation has the wrong length");
        }
        for (std::size_t k = 0; k < d; ++k) {
            std::size_t i = priority_.empty() ? k : priority_[k];
            if (a[i] != b[i]) {
                return a[i] <=> b[i];
            }
        }
        return std::strong_ordering::equal;
    }

    // The Magnus map sends a_i to 1 + x_i in the ring of noncommutative power
    // series. Two elements compare as the first differing coefficient of their
    // expansions, monomials ordered by degree and then lexicographically. That
    // coefficient is the first coefficient of the lowest-degree homogeneous
    // part of M(a^-1 b) - 1, which is what is computed here.
    std::strong_ordering compare_magnus(const Group& g, const GroupElement& a, const GroupElement& b) const
    {
        GroupElement w = g.multiply(g.inverse(a), b);
        if (w.size() == 0) {
            return std::strong_ordering::equal;
        }
        std::size_t deg = std::max<std::size_t>({a.size(), b.size(), 1});
        deg = std::min(deg, d_max_);
        while (true) {
            if (auto sign = lowest_magnus_sign(w, deg)) {
                return *sign > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
            }
            if (deg >= d_max_) {
                throw undecidable_at_cap("Magnus comparison undecided at truncation degree " +
                                         std::to_string(d_max_) + " for " + g.format(a) + " vs " + g.format(b));
            }
            deg = std::min(deg * 2, d_max_);
        }
    }

    // Sign of the first nonzero coefficient of M(w) - 1 truncated at degree `deg`, if any.
    static std::optional<int> lowest_magnus_sign(const GroupElement& w, std::size_t deg)
    {
        using Word = std::vector<std::uint8_t>;
        std::map<Word, std::int64_t> series{{Word{}, 1}};
        for (auto letter : w.data()) {
            auto x = static_cast<std::uint8_t>((letter < 0 ? -letter : letter) - 1);
            bool inv = letter < 0;
            std::map<Word, std::int64_t> next;
            for (const auto& [mono, c] : series) {
                for (std::size_t j = 0; mono.size() + j <= deg; ++j) {
                    if (!inv && j > 1) {
                        break;
                    }
                    std::int64_t f = (inv && (j % 2 == 1)) ? -1 : 1;
                    Word m = mono;
                    m.insert(m.end(), j, x);
                    std::int64_t& slot = next[m];
                    std::int64_t add = 0;
                    if (__builtin_mul_overflow(c, f, &add) || __builtin_add_overflow(slot, add, &slot)) {
                        throw error("Magnus coefficient overflow");
                    }
                }
            }
            series.clear();
            for (auto& [m, c] : next) {
                if (c != 0) {
                    series.emplace(m, c);
                }
            }
        }
        series.erase(Word{}); // constant term of M(w) - 1 is 1 - 1 = 0
        if (series.empty()) {
            return std::nullopt;
        }
        // lowest degree, then lexicographic
        const std::pair<const Word, std::int64_t>* best = nullptr;
        for (const auto& kv : series) {
            if (!best || kv.first.size() < best->first.size()) {
                best = &kv;
            }
        }
        return best->second > 0 ? 1 : -1;
    }

    Kind kind_ = Kind::lex_zd;
    std::vector<std::size_t> priority_;
    std::size_t d_max_ = 16;
    bool reversed_ = false;
};

} // namespace nearca
