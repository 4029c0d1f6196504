#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace nearca;

namespace {

using Pair = std::pair<std::uint64_t, std::uint64_t>;

// Every (alpha, beta) pair by direct star products.
template <FiniteExactField F>
std::set<Pair> brute_force(SearchKind kind, const GroupPtr& g, const F& field, const FiniteSubset& support,
                           std::uint64_t degree)
{
    SearchSpace<F> space(g, field, monomial_basis(support, degree));
    const auto id = NearRingElement<F>::identity(g, field);
    std::set<Pair> out;
    for (std::uint64_t b = 0; b < space.size(); ++b) {
        auto beta = space.element(b);
        for (std::uint64_t a = 0; a < space.size(); ++a) {
            auto alpha = space.element(a);
            auto p = star(alpha, beta);
            if (kind == SearchKind::unit && p == id) {
                out.emplace(a, b);
            }
            if (kind == SearchKind::zero_divisor && p.is_zero() && !alpha.is_zero() && !beta.is_constant()) {
                out.emplace(a, b);
            }
            if (kind == SearchKind::idempotent && a == b && p == alpha) {
                out.emplace(a, b);
            }
        }
    }
    return out;
}

template <FiniteExactField F>
std::set<Pair> found(const SearchResult<F>& r)
{
    std::set<Pair> out;
    for (const auto& f : r.findings) {
        out.emplace(f.alpha_index, f.beta_index);
    }
    return out;
}

} // namespace

TEST(Search, MonomialBasisCounts)
{
    auto z = Group::free_abelian(1);
    EXPECT_EQ(monomial_basis(nearca::testing::elements(*z, {"0", "1"}), 2).size(), 6U);
    EXPECT_EQ(monomial_basis(ball(*z, 1), 2).size(), 10U);
    EXPECT_EQ(monomial_basis(ball(*z, 1), 0).size(), 1U);
}

TEST(Search, SpaceIndexRoundTrip)
{
    auto z = Group::free_abelian(1);
    PrimeField f3(3);
    SearchSpace<PrimeField> s(z, f3, monomial_basis(ball(*z, 1), 1));
    EXPECT_EQ(s.size(), 81U);
    for (std::uint64_t i = 0; i < s.size(); ++i) {
        auto e = s.element(i);
        std::vector<Fp> c;
        for (const auto& m : s.monomials()) {
            c.push_back(e.coefficient(m));
        }
        EXPECT_EQ(s.index_of(c), i);
    }
}

TEST(Search, AgreesWithBruteForceOnSmallSpaces)
{
    auto z = Group::free_abelian(1);
    auto support = nearca::testing::elements(*z, {"0", "1"});
    for (auto kind : {SearchKind::unit, SearchKind::zero_divisor, SearchKind::idempotent}) {
        PrimeField f2(2);
        EXPECT_EQ(found(exhaustive_search(kind, z, f2, support, 2)), brute_force(kind, z, f2, support, 2))
            << to_string(kind);
        PrimeField f3(3);
        EXPECT_EQ(found(exhaustive_search(kind, z, f3, support, 1)), brute_force(kind, z, f3, support, 1))
            << to_string(kind);
    }
}

TEST(Search, UnitsOverF2AreTrivial)
{
    auto z = Group::free_abelian(1);
    PrimeField f2(2);
    auto r = exhaustive_search(SearchKind::unit, z, f2, ball(*z, 1), 2);
    // (X_g + b, X_{-g} + b) for g in {-1, 0, 1}, b in F_2
    EXPECT_EQ(r.findings.size(), 6U);
    for (const auto& f : r.findings) {
        EXPECT_EQ(f.classification, "TrivialUnit");
        ASSERT_TRUE(f.reverse_product.has_value());
        EXPECT_EQ(*f.reverse_product, NearRingElement<PrimeField>::identity(z, f2));
    }
}

TEST(Search, IdempotentsAndZeroDivisorsOverF2)
{
    auto z = Group::free_abelian(1);
    PrimeField f2(2);
    auto idem = exhaustive_search(SearchKind::idempotent, z, f2, ball(*z, 1), 2);
    std::set<std::string> got;
    for (const auto& f : idem.findings) {
        got.insert(f.alpha.str());
    }
    EXPECT_EQ(got, (std::set<std::string>{"0", "1", "X[(0)]"}));
    EXPECT_TRUE(exhaustive_search(SearchKind::zero_divisor, z, f2, ball(*z, 1), 2).findings.empty());
}

TEST(Search, RefusesOversizedSpaces)
{
    auto z = Group::free_abelian(1);
    SearchOptions opt;
    opt.max_space = 100;
    EXPECT_THROW(exhaustive_search(SearchKind::unit, z, PrimeField(2), ball(*z, 1), 2, opt), search_space_too_large);
}

TEST(Search, FindingsIndependentOfWorkerCount)
{
    auto z = Group::free_abelian(1);
    PrimeField f2(2);
    for (auto kind : {SearchKind::unit, SearchKind::idempotent, SearchKind::zero_divisor}) {
        SearchOptions one, four;
        one.workers = 1;
        four.workers = 4;
        auto a = exhaustive_search(kind, z, f2, ball(*z, 1), 2, one);
        auto b = exhaustive_search(kind, z, f2, ball(*z, 1), 2, four);
        ASSERT_EQ(a.findings.size(), b.findings.size());
        for (std::size_t i = 0; i < a.findings.size(); ++i) {
            EXPECT_EQ(a.findings[i].alpha_index, b.findings[i].alpha_index);
            EXPECT_EQ(a.findings[i].beta_index, b.findings[i].beta_index);
            EXPECT_EQ(a.findings[i].classification, b.findings[i].classification);
        }
    }
}
