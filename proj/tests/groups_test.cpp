#include <gtest/gtest.h>

#include <deque>
#include <map>

#include "support.hpp"

using namespace nearca;
using nearca::testing::elements;
using nearca::testing::random_element;

namespace {

std::vector<GroupPtr> sample_groups()
{
    return {Group::free_abelian(1), Group::free_abelian(2), Group::free(2), Group::cyclic(6)};
}

// Distance by breadth-first search in the Cayley graph, independent of
// word_length.
std::uint64_t bfs_distance(const Group& g, const GroupElement& from, const GroupElement& to, std::uint64_t cap)
{
    std::map<GroupElement, std::uint64_t> seen{{from, 0}};
    std::deque<GroupElement> q{from};
    while (!q.empty()) {
        auto x = q.front();
        q.pop_front();
        if (x == to) {
            return seen[x];
        }
        if (seen[x] == cap) {
            continue;
        }
        for (const auto& s : g.generators()) {
            auto y = g.multiply(x, s);
            if (seen.emplace(y, seen[x] + 1).second) {
                q.push_back(y);
            }
        }
    }
    return UINT64_MAX;
}

} // namespace

TEST(Groups, MultiplicationExamples)
{
    auto z2 = Group::free_abelian(2);
    EXPECT_EQ(z2->format(z2->multiply(z2->parse("(1,-2)"), z2->parse("(3,5)"))), "(4,3)");
    auto f = Group::free(2);
    EXPECT_EQ(f->format(f->multiply(f->parse("a*b"), f->parse("b^-1*a"))), "a^2");
    auto c4 = Group::cyclic(4);
    EXPECT_EQ(c4->format(c4->multiply(c4->parse("#3"), c4->parse("#2"))), "#1");
}

TEST(Groups, InverseExamples)
{
    auto z2 = Group::free_abelian(2);
    EXPECT_EQ(z2->format(z2->inverse(z2->parse("(1,-2)"))), "(-1,2)");
    auto f = Group::free(2);
    EXPECT_EQ(f->format(f->inverse(f->parse("a*b^-1"))), "b*a^-1");
    auto c4 = Group::cyclic(4);
    EXPECT_EQ(c4->format(c4->inverse(c4->parse("#3"))), "#1");
}

TEST(Groups, GroupLawsOnRandomTriples)
{
    std::mt19937_64 rng(1);
    for (const auto& g : sample_groups()) {
        for (int i = 0; i < 1000; ++i) {
            auto a = random_element(*g, rng, 3);
            auto b = random_element(*g, rng, 3);
            auto c = random_element(*g, rng, 3);
            EXPECT_EQ(g->multiply(g->multiply(a, b), c), g->multiply(a, g->multiply(b, c)));
            EXPECT_EQ(g->multiply(a, g->identity()), a);
            EXPECT_EQ(g->multiply(g->identity(), a), a);
            EXPECT_TRUE(g->is_identity(g->multiply(a, g->inverse(a))));
        }
    }
}

TEST(Groups, ParseFormatRoundTrip)
{
    std::mt19937_64 rng(2);
    for (const auto& g : sample_groups()) {
        for (int i = 0; i < 200; ++i) {
            auto a = random_element(*g, rng, 4);
            EXPECT_EQ(g->parse(g->format(a)), a) << g->format(a);
        }
    }
}

TEST(Groups, FiniteTableIsValidated)
{
    std::vector<std::vector<std::uint32_t>> bad{{0, 1}, {1, 1}};
    EXPECT_THROW(Group::finite(bad), error);
    auto c4 = Group::cyclic(4);
    EXPECT_THROW(c4->parse("#4"), error);
}

TEST(Groups, MetricIsSymmetricSatisfiesTriangleAndMatchesBfs)
{
    std::mt19937_64 rng(3);
    for (const auto& g : sample_groups()) {
        for (int i = 0; i < 200; ++i) {
            auto a = random_element(*g, rng, 2);
            auto b = random_element(*g, rng, 2);
            auto c = random_element(*g, rng, 2);
            EXPECT_EQ(g->distance(a, b), g->distance(b, a));
            EXPECT_LE(g->distance(a, c), g->distance(a, b) + g->distance(b, c));
            EXPECT_EQ(g->distance(a, b), bfs_distance(*g, a, b, 8));
        }
    }
}

TEST(Groups, BallSizes)
{
    auto z = Group::free_abelian(1);
    EXPECT_EQ(ball(*z, 2), elements(*z, {"-2", "-1", "0", "1", "2"}));
    EXPECT_EQ(ball(*z, 0).size(), 1U);
    auto f = Group::free(2);
    EXPECT_EQ(ball(*f, 1).size(), 5U);
    EXPECT_EQ(ball(*f, 2).size(), 17U);
    EXPECT_EQ(ball(*Group::free_abelian(2), 2).size(), 13U);
    for (std::uint64_t r = 0; r < 4; ++r) {
        EXPECT_TRUE(ball(*f, r).is_subset_of(ball(*f, r + 1)));
    }
}

TEST(Groups, SubsetCalculusExamples)
{
    auto z = Group::free_abelian(1);
    auto m = elements(*z, {"0", "1"});
    auto omega = box(*z, 0, 5);
    auto w = subset_calculus(*z, omega, m);
    EXPECT_EQ(w.interior, box(*z, 0, 4));
    EXPECT_EQ(w.neighborhood, box(*z, 0, 6));
    EXPECT_EQ(w.boundary, elements(*z, {"4", "5"}));

    auto id = FiniteSubset{z->identity()};
    auto w1 = subset_calculus(*z, omega, id);
    EXPECT_EQ(w1.interior, omega);
    EXPECT_EQ(w1.neighborhood, omega);
    EXPECT_TRUE(w1.boundary.empty());

    // Z^2 with M = {(0,0),(1,0),(0,1)} on [0,3)^2, against a direct oracle
    auto z2 = Group::free_abelian(2);
    auto m2 = elements(*z2, {"(0,0)", "(1,0)", "(0,1)"});
    auto w2 = subset_calculus(*z2, box(*z2, 0, 3), m2);
    std::vector<GroupElement> interior, nbhd;
    for (std::int64_t x = -1; x <= 4; ++x) {
        for (std::int64_t y = -1; y <= 4; ++y) {
            auto in = [](std::int64_t a, std::int64_t b) { return 0 <= a && a < 3 && 0 <= b && b < 3; };
            if (in(x, y) && in(x + 1, y) && in(x, y + 1)) {
                interior.push_back({x, y});
            }
            if (in(x, y) || in(x - 1, y) || in(x, y - 1)) {
                nbhd.push_back({x, y});
            }
        }
    }
    EXPECT_EQ(w2.interior, FiniteSubset(interior));
    EXPECT_EQ(w2.interior, box(*z2, 0, 2));
    EXPECT_EQ(w2.neighborhood, FiniteSubset(nbhd));
    EXPECT_EQ(w2.boundary.size(), nbhd.size() - interior.size());
}

TEST(Groups, InteriorInsideWindowInsideNeighborhood)
{
    std::mt19937_64 rng(4);
    for (const auto& g : sample_groups()) {
        for (int i = 0; i < 50; ++i) {
            std::vector<GroupElement> m{g->identity()}, om;
            for (int k = 0; k < 3; ++k) {
                m.push_back(random_element(*g, rng, 1));
            }
            for (int k = 0; k < 8; ++k) {
                om.push_back(random_element(*g, rng, 2));
            }
            auto w = subset_calculus(*g, FiniteSubset(om), FiniteSubset(m));
            EXPECT_TRUE(w.interior.is_subset_of(FiniteSubset(om)));
            EXPECT_TRUE(FiniteSubset(om).is_subset_of(w.neighborhood));
        }
    }
}

TEST(Groups, FolnerBoxes)
{
    auto z = Group::free_abelian(1);
    EXPECT_EQ(folner_set(*z, 5), box(*z, 0, 5));
    EXPECT_EQ(folner_set(*Group::free_abelian(2), 3).size(), 9U);
    EXPECT_THROW(folner_set(*Group::free(2), 3), unsupported_error);
    auto m = elements(*z, {"0", "1"});
    Rational prev(2);
    for (std::size_t i = 1; i <= 20; ++i) {
        auto f = folner_set(*z, i);
        auto w = subset_calculus(*z, f, m);
        Rational ratio(static_cast<std::int64_t>(w.boundary.size()), static_cast<std::int64_t>(i));
        EXPECT_TRUE(ratio == Rational(2, static_cast<std::int64_t>(i)));
        EXPECT_TRUE(ratio <= prev);
        prev = ratio;
    }
}

TEST(Orders, Examples)
{
    auto z2 = Group::free_abelian(2);
    auto lex = BiInvariantOrder::for_group(*z2);
    EXPECT_EQ(lex.compare(*z2, z2->parse("(0,5)"), z2->parse("(1,-100)")), std::strong_ordering::less);
    auto f = Group::free(2);
    auto mag = BiInvariantOrder::for_group(*f);
    EXPECT_EQ(mag.compare(*f, f->identity(), f->parse("a*b*a^-1*b^-1")), std::strong_ordering::less);
    auto g = f->parse("a*b^-1*a");
    EXPECT_EQ(mag.compare(*f, g, g), std::strong_ordering::equal);
}

TEST(Orders, PriorityPermutesCoordinates)
{
    auto z2 = Group::free_abelian(2);
    auto o = BiInvariantOrder::lex({1, 0});
    EXPECT_EQ(o.compare(*z2, z2->parse("(0,5)"), z2->parse("(1,-100)")), std::strong_ordering::greater);
}

TEST(Orders, BiInvariantTotalAndTransitive)
{
    std::mt19937_64 rng(5);
    for (const auto& g : {Group::free_abelian(1), Group::free_abelian(2), Group::free(2)}) {
        auto o = BiInvariantOrder::for_group(*g);
        for (int i = 0; i < 300; ++i) {
            auto f = random_element(*g, rng, 3);
            auto a = random_element(*g, rng, 3);
            auto b = random_element(*g, rng, 3);
            auto ab = o.compare(*g, a, b);
            EXPECT_EQ(ab == std::strong_ordering::equal, a == b);
            EXPECT_EQ(o.compare(*g, b, a), 0 <=> (ab < 0 ? -1 : ab > 0 ? 1 : 0));
            EXPECT_EQ(o.compare(*g, g->multiply(f, a), g->multiply(f, b)), ab);
            EXPECT_EQ(o.compare(*g, g->multiply(a, f), g->multiply(b, f)), ab);
            auto c = random_element(*g, rng, 3);
            if (o.less(*g, a, b) && o.less(*g, b, c)) {
                EXPECT_TRUE(o.less(*g, a, c));
            }
        }
    }
}

TEST(Orders, MagnusCapRaisesInsteadOfGuessing)
{
    auto f = Group::free(2);
    auto o = BiInvariantOrder::magnus(2);
    // [[a,b],a] has Magnus expansion 1 + (degree-3 terms); degree 2 cannot decide it.
    auto c = f->parse("a*b*a^-1*b^-1");
    auto cc = f->multiply(f->multiply(c, f->parse("a")), f->multiply(f->inverse(c), f->parse("a^-1")));
    EXPECT_THROW(o.compare(*f, f->identity(), cc), undecidable_at_cap);
    EXPECT_NO_THROW(BiInvariantOrder::magnus(16).compare(*f, f->identity(), cc));
}
