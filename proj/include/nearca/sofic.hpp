#pragma once

// Finite S-labeled graphs as approximations of a group: ball isomorphisms
// psi_{v,r}: B_S(r) -> B(v,r), the sets V(r), greedy ball packings,
// (1 - eps) certificates, and the rank audit of a linear CA transported to
// the graph.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nearca/ca.hpp"
#include "nearca/error.hpp"
#include "nearca/groups.hpp"
#include "nearca/matrix.hpp"

namespace nearca {

class LabeledGraph {
public:
    using vertex = std::uint32_t;

    LabeledGraph(std::size_t vertices, std::size_t labels)
        : n_(vertices), labels_(labels), out_(vertices, std::vector<std::vector<vertex>>(labels))
    {
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t label_count() const noexcept { return labels_; }

    /// Adds (v, s, w); duplicates are ignored.
    void add_edge(vertex v, std::size_t s, vertex w)
    {
        if (v >= n_ || w >= n_ || s >= labels_) {
            throw error("edge (" + std::to_string(v) + ", " + std::to_string(s) + ", " + std::to_string(w) +
                        ") out of range");
        }
        auto& list = out_[v][s];
        auto it = std::lower_bound(list.begin(), list.end(), w);
        if (it == list.end() || *it != w) {
            list.insert(it, w);
            ++edges_;
        }
    }

    const std::vector<vertex>& targets(vertex v, std::size_t s) const { return out_[v][s]; }

    bool has_edge(vertex v, std::size_t s, vertex w) const
    {
        const auto& list = out_[v][s];
        return std::binary_search(list.begin(), list.end(), w);
    }

    std::size_t edge_count() const noexcept { return edges_; }

    /// (v, s, w) in E iff (w, s^-1, v) in E, with s^-1 taken from `inverse_label`.
    bool involution_consistent(const std::vector<std::size_t>& inverse_label) const
    {
        for (vertex v = 0; v < n_; ++v) {
            for (std::size_t s = 0; s < labels_; ++s) {
                for (auto w : out_[v][s]) {
                    if (!has_edge(w, inverse_label[s], v)) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

    /// Vertices at graph distance <= r from v, ascending.
    std::vector<vertex> ball(vertex v, std::size_t r) const
    {
        std::vector<std::size_t> dist(n_, SIZE_MAX);
        std::deque<vertex> q{v};
        dist[v] = 0;
        std::vector<vertex> out{v};
        while (!q.empty()) {
            auto a = q.front();
            q.pop_front();
            if (dist[a] == r) {
                continue;
            }
            for (std::size_t s = 0; s < labels_; ++s) {
                for (auto w : out_[a][s]) {
                    if (dist[w] == SIZE_MAX) {
                        dist[w] = dist[a] + 1;
                        out.push_back(w);
                        q.push_back(w);
                    }
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::size_t n_;
    std::size_t labels_;
    std::vector<std::vector<std::vector<vertex>>> out_;
    std::size_t edges_ = 0;
};

inline std::vector<std::size_t> inverse_labels(const Group& grp)
{
    std::vector<std::size_t> inv;
    for (std::size_t i = 0; i < grp.generators().size(); ++i) {
        inv.push_back(grp.generator_inverse(i));
    }
    return inv;
}

struct QuotientParams {
    enum class Kind { cycle, torus, schreier, finite } kind = Kind::cycle;
    std::size_t n = 1;
    std::uint64_t seed = 0;

    static QuotientParams cycle(std::size_t n) { return {Kind::cycle, n, 0}; }
    static QuotientParams torus(std::size_t n) { return {Kind::torus, n, 0}; }
    static QuotientParams schreier(std::size_t n, std::uint64_t seed) { return {Kind::schreier, n, seed}; }
    static QuotientParams finite() { return {Kind::finite, 0, 0}; }
};

/// Finite S-labeled graphs with edges (v, s, v.s): cycle(N) for Z, torus(N)
/// for Z^d, a seeded Schreier graph for a free group, or the Cayley graph of
/// a finite group.
inline LabeledGraph cayley_quotient(const Group& grp, const QuotientParams& p)
{
    using K = QuotientParams::Kind;
    const auto& gens = grp.generators();
    switch (p.kind) {
    case K::cycle:
    case K::torus: {
        if (grp.kind() != GroupKind::free_abelian || (p.kind == K::cycle && grp.rank() != 1)) {
            throw mismatch_error(p.kind == K::cycle ? "cycle graphs approximate Z" : "torus graphs approximate Z^d");
        }
        if (p.n < 1) {
            throw error("quotient size must be >= 1");
        }
        const std::size_t d = grp.rank();
        std::size_t total = 1;
        for (std::size_t i = 0; i < d; ++i) {
            total *= p.n;
        }
        LabeledGraph g(total, gens.size());
        for (std::size_t v = 0; v < total; ++v) {
            for (std::size_t s = 0; s < gens.size(); ++s) {
                std::size_t w = 0, rest = v, scale = 1;
                for (std::size_t i = 0; i < d; ++i) {
                    auto digit = static_cast<std::int64_t>(rest % p.n);
                    rest /= p.n;
                    auto m = static_cast<std::int64_t>(p.n);
                    auto nd = ((digit + gens[s][i]) % m + m) % m;
                    w += static_cast<std::size_t>(nd) * scale;
                    scale *= p.n;
                }
                g.add_edge(static_cast<LabeledGraph::vertex>(v), s, static_cast<LabeledGraph::vertex>(w));
            }
        }
        return g;
    }
    case K::schreier: {
        if (grp.kind() != GroupKind::free) {
            throw mismatch_error("Schreier graphs here approximate free groups");
        }
        if (p.n < 1) {
            throw error("quotient size must be >= 1");
        }
        std::mt19937_64 rng(p.seed);
        LabeledGraph g(p.n, gens.size());
        for (std::size_t s = 0; s < gens.size(); s += 2) {
            std::vector<LabeledGraph::vertex> perm(p.n);
            std::iota(perm.begin(), perm.end(), 0U);
            // Fisher-Yates with the engine directly, for identical output across standard libraries
            for (std::size_t i = p.n; i > 1; --i) {
                std::swap(perm[i - 1], perm[rng() % i]);
            }
            for (std::size_t v = 0; v < p.n; ++v) {
                g.add_edge(static_cast<LabeledGraph::vertex>(v), s, perm[v]);
                g.add_edge(perm[v], s + 1, static_cast<LabeledGraph::vertex>(v));
            }
        }
        return g;
    }
    case K::finite: {
        if (grp.kind() != GroupKind::finite) {
            throw mismatch_error("full Cayley graphs need a finite group");
        }
        LabeledGraph g(grp.rank(), gens.size());
        for (std::size_t v = 0; v < grp.rank(); ++v) {
            GroupElement x{static_cast<std::int64_t>(v)};
            for (std::size_t s = 0; s < gens.size(); ++s) {
                g.add_edge(static_cast<LabeledGraph::vertex>(v), s,
                           static_cast<LabeledGraph::vertex>(grp.multiply(x, gens[s])[0]));
            }
        }
        return g;
    }
    }
    return LabeledGraph(0, 0);
}

/// psi_{v,r}: image[i] is the vertex assigned to domain[i].
struct BallIso {
    FiniteSubset domain;
    std::vector<LabeledGraph::vertex> image;

    LabeledGraph::vertex operator()(const GroupElement& g) const
    {
        auto i = domain.index_of(g);
        if (!i) {
            throw error("element outside the ball");
        }
        return image[*i];
    }

    friend bool operator==(const BallIso& a, const BallIso& b) { return a.domain == b.domain && a.image == b.image; }
};

/// Shared group balls, keyed by radius.
class BallCache {
public:
    explicit BallCache(const Group& grp) : grp_(grp) {}
    const FiniteSubset& operator()(std::size_t r)
    {
        auto it = cache_.find(r);
        if (it == cache_.end()) {
            it = cache_.emplace(r, nearca::ball(grp_, r)).first;
        }
        return it->second;
    }
    const Group& group() const { return grp_; }

private:
    const Group& grp_;
    std::map<std::size_t, FiniteSubset> cache_;
};

/// Builds psi by following labels from psi(1_G) = v and accepts it only when
/// it is a bijection onto B(v,r) that preserves and reflects labeled edges.
inline std::optional<BallIso> ball_and_iso(const LabeledGraph& g, BallCache& balls, LabeledGraph::vertex v, std::size_t r)
{
    const Group& grp = balls.group();
    const auto& dom = balls(r);
    const auto& gens = grp.generators();
    if (gens.size() != g.label_count()) {
        throw mismatch_error("graph labels do not match the generating set");
    }
    constexpr auto unset = static_cast<LabeledGraph::vertex>(-1);
    std::vector<LabeledGraph::vertex> img(dom.size(), unset);
    std::deque<std::size_t> q;
    auto e = *dom.index_of(grp.identity());
    img[e] = v;
    q.push_back(e);
    std::vector<std::size_t> len(dom.size(), SIZE_MAX);
    len[e] = 0;
    while (!q.empty()) {
        auto xi = q.front();
        q.pop_front();
        if (len[xi] == r) {
            continue;
        }
        for (std::size_t s = 0; s < gens.size(); ++s) {
            auto yi = dom.index_of(grp.multiply_unchecked(dom[xi], gens[s]));
            if (!yi) {
                continue;
            }
            const auto& t = g.targets(img[xi], s);
            if (t.size() != 1) {
                return std::nullopt;
            }
            if (img[*yi] == unset) {
                img[*yi] = t[0];
                len[*yi] = len[xi] + 1;
                q.push_back(*yi);
            } else if (img[*yi] != t[0]) {
                return std::nullopt;
            }
        }
    }
    auto sorted = img;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted != g.ball(v, r)) {
        return std::nullopt;
    }
    // reflects edges: every graph edge inside the ball comes from a group edge
    std::map<LabeledGraph::vertex, std::size_t> pre;
    for (std::size_t i = 0; i < img.size(); ++i) {
        pre.emplace(img[i], i);
    }
    for (std::size_t i = 0; i < img.size(); ++i) {
        for (std::size_t s = 0; s < gens.size(); ++s) {
            auto yi = dom.index_of(grp.multiply_unchecked(dom[i], gens[s]));
            if (yi && !g.has_edge(img[i], s, img[*yi])) {
                return std::nullopt;
            }
            for (auto w : g.targets(img[i], s)) {
                auto it = pre.find(w);
                if (it != pre.end() && (!yi || *yi != it->second)) {
                    return std::nullopt;
                }
            }
        }
    }
    return BallIso{dom, std::move(img)};
}

inline std::optional<BallIso> ball_and_iso(const LabeledGraph& g, const Group& grp, LabeledGraph::vertex v, std::size_t r)
{
    BallCache balls(grp);
    return ball_and_iso(g, balls, v, r);
}

inline std::vector<LabeledGraph::vertex> v_r_set(const LabeledGraph& g, BallCache& balls, std::size_t r)
{
    std::vector<LabeledGraph::vertex> out;
    for (LabeledGraph::vertex v = 0; v < g.vertex_count(); ++v) {
        if (ball_and_iso(g, balls, v, r)) {
            out.push_back(v);
        }
    }
    return out;
}

inline std::vector<LabeledGraph::vertex> v_r_set(const LabeledGraph& g, const Group& grp, std::size_t r)
{
    BallCache balls(grp);
    return v_r_set(g, balls, r);
}

/// Greedy maximal subset of `base` (scanned ascending) with pairwise disjoint radius-r balls.
inline std::vector<LabeledGraph::vertex> greedy_pack(const LabeledGraph& g, const std::vector<LabeledGraph::vertex>& base,
                                                     std::size_t r)
{
    std::vector<char> used(g.vertex_count(), 0);
    std::vector<LabeledGraph::vertex> out;
    auto sorted = base;
    std::sort(sorted.begin(), sorted.end());
    for (auto v : sorted) {
        auto b = g.ball(v, r);
        if (std::none_of(b.begin(), b.end(), [&](auto w) { return used[w] != 0; })) {
            out.push_back(v);
            for (auto w : b) {
                used[w] = 1;
            }
        }
    }
    return out;
}

struct SoficCertificate {
    std::size_t r = 0;
    Rational epsilon;
    std::size_t vertices = 0;
    std::vector<LabeledGraph::vertex> v_r, v_2r, v_3r, packing;
    std::size_t ball_2r = 0; // |B_S(2r)|
    bool pass = false;       // |V(r)| >= (1 - eps)|V|
    bool nesting_ok = false;
    bool ball_inclusion_ok = false;    // B(v, r) in V(kr) for v in V((k+1)r), k = 1, 2
    bool packing_ok = false;  // |B_S(2r)| |V'| >= |V(3r)|
    bool covering_ok = false; // V(3r) in the union of B(v, 2r), v in V'
    std::vector<std::string> transcript;

    bool invariants_ok() const { return nesting_ok && ball_inclusion_ok && packing_ok && covering_ok; }
};

inline SoficCertificate certificate(const LabeledGraph& g, const Group& grp, std::size_t r, const Rational& eps)
{
    if (!(Rational(0) < eps) || !(eps < Rational(1))) {
        throw error("epsilon must lie in (0, 1)");
    }
    BallCache balls(grp);
    SoficCertificate c;
    c.r = r;
    c.epsilon = eps;
    c.vertices = g.vertex_count();
    c.v_r = v_r_set(g, balls, r);
    c.v_2r = v_r_set(g, balls, 2 * r);
    c.v_3r = v_r_set(g, balls, 3 * r);
    c.packing = greedy_pack(g, c.v_3r, r);
    c.ball_2r = balls(2 * r).size();

    const Rational lhs(static_cast<std::int64_t>(c.v_r.size()));
    const Rational rhs = (Rational(1) - eps) * Rational(static_cast<std::int64_t>(c.vertices));
    c.pass = !(lhs < rhs);
    c.transcript.push_back("|V(r)| = " + lhs.str() + (c.pass ? " >= " : " < ") + rhs.str() + " = (1 - eps)|V|");

    auto subset = [](const std::vector<LabeledGraph::vertex>& a, const std::vector<LabeledGraph::vertex>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    c.nesting_ok = subset(c.v_3r, c.v_2r) && subset(c.v_2r, c.v_r);
    c.transcript.push_back("V(r) >= V(2r) >= V(3r): " + std::string(c.nesting_ok ? "holds" : "fails"));

    c.ball_inclusion_ok = true;
    for (auto v : c.v_2r) {
        c.ball_inclusion_ok = c.ball_inclusion_ok && subset(g.ball(v, r), c.v_r);
    }
    for (auto v : c.v_3r) {
        c.ball_inclusion_ok = c.ball_inclusion_ok && subset(g.ball(v, r), c.v_2r);
    }
    c.transcript.push_back("B(v,r) in V(kr) for v in V((k+1)r), k=1,2: " + std::string(c.ball_inclusion_ok ? "holds" : "fails"));

    c.packing_ok = c.ball_2r * c.packing.size() >= c.v_3r.size();
    c.transcript.push_back("|B_S(2r)||V'| = " + std::to_string(c.ball_2r * c.packing.size()) +
                           (c.packing_ok ? " >= " : " < ") + std::to_string(c.v_3r.size()) + " = |V(3r)|");

    std::vector<char> covered(g.vertex_count(), 0);
    for (auto v : c.packing) {
        for (auto w : g.ball(v, 2 * r)) {
            covered[w] = 1;
        }
    }
    c.covering_ok = std::all_of(c.v_3r.begin(), c.v_3r.end(), [&](auto v) { return covered[v] != 0; });
    c.transcript.push_back("V(3r) covered by radius-2r balls around V': " +
                           std::string(c.covering_ok ? "holds" : "fails"));
    return c;
}

// ---------------------------------------------------------------------------

template <ExactField F>
struct GraphRankAudit {
    std::size_t n = 0;
    std::size_t v_r = 0, v_2r = 0, v_3r = 0;
    std::size_t rank_mu1 = 0;                 // dim Z
    std::optional<bool> projection_ok;        // eta_2 o mu_1 = projection onto A^{V(3r)}
    bool inequality_ok = false;               // rank_mu1 >= n |V(3r)|
    std::optional<Matrix<F>> mu1;
};

namespace detail {

// Transports a linear symbol along psi_{v,r} for every v in `outs`:
// row block v, column block psi_v(h) (indexed in `ins`), entry symbol(h).
template <ExactField F>
Matrix<F> transport_rule(const LabeledGraph& g, BallCache& balls, const LinearRule<F>& rule, std::size_t n,
                         const std::vector<LabeledGraph::vertex>& outs, const std::vector<LabeledGraph::vertex>& ins,
                         std::size_t r)
{
    const F& field = rule.symbol.ring().field;
    Matrix<F> m(field, outs.size() * n, ins.size() * n);
    for (std::size_t i = 0; i < outs.size(); ++i) {
        auto psi_v = ball_and_iso(g, balls, outs[i], r);
        if (!psi_v) {
            throw error("vertex " + std::to_string(outs[i]) + " has no radius-r ball isomorphism");
        }
        for (const auto& [h, a] : rule.symbol.terms()) {
            auto w = (*psi_v)(h);
            auto it = std::lower_bound(ins.begin(), ins.end(), w);
            if (it == ins.end() || *it != w) {
                throw error("transported ball leaves the input vertex set");
            }
            auto j = static_cast<std::size_t>(it - ins.begin());
            for (std::size_t x = 0; x < n; ++x) {
                for (std::size_t y = 0; y < n; ++y) {
                    m(i * n + x, j * n + y) = m(i * n + x, j * n + y) + a(x, y);
                }
            }
        }
    }
    return m;
}

} // namespace detail

/// mu_1: A^{V(r)} -> A^{V(2r)}, mu_1(c)(v) = mu(c|_{B(v,r)} o psi_{v,r}), and
/// with a left inverse eta, eta_2: A^{V(2r)} -> A^{V(3r)} likewise.
template <ExactField F>
GraphRankAudit<F> graph_ca_rank_audit(const LabeledGraph& g, const CellularAutomaton<F>& tau, std::size_t r,
                                      const std::optional<CellularAutomaton<F>>& left_inverse = std::nullopt)
{
    if (!tau.is_linear()) {
        throw unsupported_error("the rank audit needs a linear rule");
    }
    const Group& grp = tau.group();
    BallCache balls(grp);
    if (!tau.memory_set().is_subset_of(balls(r))) {
        throw error("memory set is not contained in B_S(r)");
    }
    if (left_inverse && !left_inverse->memory_set().is_subset_of(balls(r))) {
        throw error("left inverse memory set is not contained in B_S(r)");
    }
    GraphRankAudit<F> a;
    a.n = tau.dimension();
    auto v1 = v_r_set(g, balls, r);
    auto v2 = v_r_set(g, balls, 2 * r);
    auto v3 = v_r_set(g, balls, 3 * r);
    a.v_r = v1.size();
    a.v_2r = v2.size();
    a.v_3r = v3.size();
    if (v2.empty()) {
        throw error("V(2r) is empty");
    }
    auto mu1 = detail::transport_rule(g, balls, tau.linear(), a.n, v2, v1, r);
    a.rank_mu1 = rank(mu1);
    a.inequality_ok = a.rank_mu1 >= a.n * a.v_3r;
    if (left_inverse) {
        auto eta2 = detail::transport_rule(g, balls, left_inverse->linear(), a.n, v3, v2, r);
        auto prod = eta2 * mu1;
        Matrix<F> proj(tau.field(), v3.size() * a.n, v1.size() * a.n);
        for (std::size_t i = 0; i < v3.size(); ++i) {
            auto j = static_cast<std::size_t>(std::lower_bound(v1.begin(), v1.end(), v3[i]) - v1.begin());
            for (std::size_t x = 0; x < a.n; ++x) {
                proj(i * a.n + x, j * a.n + x) = tau.field().one();
            }
        }
        a.projection_ok = prod == proj;
    }
    a.mu1 = std::move(mu1);
    return a;
}

} // namespace nearca
