#include <gtest/gtest.h>

#include "support.hpp"

using namespace nearca;
using nearca::testing::random_element;
using nearca::testing::random_exponent;
using nearca::testing::random_near_ring;
using nearca::testing::random_nonconstant;
using nearca::testing::random_twisted;

namespace {

using Q = RationalField;
using NR = NearRingElement<Q>;

GroupPtr z1() { return Group::free_abelian(1); }

NR q_poly(const std::string& s, const GroupPtr& g = z1()) { return parse_near_ring(s, g, Q{}); }

ExponentVector ev(const Group& g, std::initializer_list<std::pair<const char*, std::uint64_t>> e)
{
    std::vector<ExponentVector::entry> v;
    for (auto [lit, k] : e) {
        v.emplace_back(g.parse(lit), k);
    }
    return ExponentVector(std::move(v));
}

// (u * v)(g) = sum_h u(h) v(h^-1 g), summed directly over all pairs.
ExponentVector convolve_oracle(const Group& grp, const ExponentVector& u, const ExponentVector& v)
{
    std::vector<ExponentVector::entry> out;
    for (const auto& [h, a] : u.entries()) {
        for (const auto& [k, b] : v.entries()) {
            out.emplace_back(grp.multiply(h, k), a * b);
        }
    }
    return ExponentVector(std::move(out));
}

} // namespace

TEST(ExponentVectors, ConvolutionExamples)
{
    auto g = z1();
    EXPECT_EQ(exp_convolve(*g, ExponentVector::dirac(g->parse("2")), ExponentVector::dirac(g->parse("3"))),
              ExponentVector::dirac(g->parse("5")));
    EXPECT_EQ(exp_convolve(*g, ExponentVector::dirac(g->parse("0"), 2), ExponentVector::dirac(g->parse("1"))),
              ExponentVector::dirac(g->parse("1"), 2));
    auto u = ev(*g, {{"0", 1}, {"1", 1}});
    EXPECT_EQ(exp_convolve(*g, u, u), ev(*g, {{"0", 1}, {"1", 2}, {"2", 1}}));
}

TEST(ExponentVectors, ConvolutionLawsOnRandomInputs)
{
    std::mt19937_64 rng(1);
    for (const auto& g : {Group::free_abelian(2), Group::free(2)}) {
        auto support = ball(*g, 1);
        for (int i = 0; i < 300; ++i) {
            auto u = random_exponent(support, 3, rng);
            auto v = random_exponent(support, 3, rng);
            auto uv = exp_convolve(*g, u, v);
            EXPECT_EQ(uv, convolve_oracle(*g, u, v));
            EXPECT_EQ(uv.support(), product(*g, u.support(), v.support()));
            EXPECT_EQ(uv.total_degree(), u.total_degree() * v.total_degree());
        }
    }
}

TEST(Shift, RelabelsVariablesAndIsAnAction)
{
    auto g = z1();
    EXPECT_EQ(shift(g->parse("1"), q_poly("X[0]^2*X[2]")), q_poly("X[1]^2*X[3]"));
    EXPECT_EQ(shift(g->parse("5"), q_poly("7")), q_poly("7"));
    std::mt19937_64 rng(2);
    auto f = Group::free(2);
    for (int i = 0; i < 200; ++i) {
        auto a = random_near_ring(f, Q{}, ball(*f, 1), 3, 4, rng);
        auto x = random_element(*f, rng);
        auto y = random_element(*f, rng);
        EXPECT_EQ(shift(x, shift(y, a)), shift(f->multiply(x, y), a));
        EXPECT_EQ(shift(f->inverse(x), shift(x, a)), a);
    }
}

TEST(Star, WorkedExampleOverZ)
{
    auto p = star(q_poly("X[(1)]^3*X[(0)] + 1"), q_poly("X[(2)]^2 - X[(3)]^2"));
    auto expected = q_poly("(X[3]^2 - X[4]^2)^3*(X[2]^2 - X[3]^2) + 1");
    EXPECT_EQ(p, expected);
    EXPECT_EQ(p.size(), 9U);
}

TEST(Star, ConstantsAndIdentity)
{
    EXPECT_TRUE(star(q_poly("X[0] - 1"), q_poly("1")).is_zero());
    std::mt19937_64 rng(3);
    auto g = Group::free_abelian(2);
    auto id = NR::identity(g, Q{});
    for (int i = 0; i < 200; ++i) {
        auto a = random_near_ring(g, Q{}, ball(*g, 1), 3, 4, rng);
        EXPECT_EQ(star(id, a), a);
        EXPECT_EQ(star(a, id), a);
        EXPECT_EQ(star(a, NR::one(g, Q{})), NR::constant(g, Q{}, a.coefficient_sum()));
        EXPECT_EQ(star(NR::one(g, Q{}), a), NR::one(g, Q{}));
    }
}

TEST(Star, LeftDistributiveAndAssociative)
{
    std::mt19937_64 rng(4);
    for (const auto& g : {Group::free_abelian(1), Group::free_abelian(2), Group::free(2)}) {
        auto support = ball(*g, 1);
        for (int i = 0; i < 60; ++i) {
            auto a = random_near_ring(g, Q{}, support, 2, 3, rng);
            auto b = random_near_ring(g, Q{}, support, 2, 3, rng);
            auto c = random_near_ring(g, Q{}, support, 2, 3, rng);
            EXPECT_EQ(star(a + b, c), star(a, c) + star(b, c));
            EXPECT_EQ(star(star(a, b), c), star(a, star(b, c)));
        }
    }
}

TEST(Star, RightDistributivityFailsWithRecordedWitness)
{
    auto a = q_poly("X[0]^2");
    auto b = q_poly("X[0]");
    EXPECT_EQ(star(a, b + b), q_poly("4*X[0]^2"));
    EXPECT_EQ(star(a, b) + star(a, b), q_poly("2*X[0]^2"));
    EXPECT_NE(star(a, b + b), star(a, b) + star(a, b));
}

TEST(PolynomialApply, Examples)
{
    Q q;
    auto a = q_poly("X[3]*X[1] - 2");
    EXPECT_EQ(polynomial_apply<Q>({q.zero(), q.one()}, a), a);
    auto x0 = q_poly("X[0]");
    EXPECT_TRUE(polynomial_apply<Q>({q.zero(), q.from_int(-1), q.one()}, x0).is_zero());
    PrimeField f2(2);
    auto g = z1();
    auto b = parse_near_ring("X[0] + 1", g, f2);
    EXPECT_EQ(polynomial_apply<PrimeField>({f2.zero(), f2.one(), f2.one()}, b), parse_near_ring("1", g, f2));
}

TEST(Embeddings, IotaExamplesAndHomomorphism)
{
    auto g = z1();
    Q q;
    EXPECT_EQ(embed_group_ring(parse_group_ring("[4]", g, q)), q_poly("X[4]"));
    EXPECT_TRUE(embed_group_ring(ScalarGroupRing<Q>(g, ScalarRing<Q>{q})).is_zero());
    auto a = parse_group_ring("1 + [1]", g, q);
    auto b = parse_group_ring("1 - [1]", g, q);
    EXPECT_EQ(embed_group_ring(a * b), star(embed_group_ring(a), embed_group_ring(b)));
    EXPECT_EQ(embed_group_ring(a * b), q_poly("X[0] - X[2]"));
    MatrixGroupRing<Q> m(g, MatrixRing<Q>{q, 2});
    EXPECT_THROW(embed_group_ring(m), unsupported_error);
}

TEST(Embeddings, TwistedExamples)
{
    auto g = z1();
    PrimeField f2(2);
    TwistedRing<PrimeField> tr{f2};
    auto t = TwistedPoly<PrimeField>::t(f2);
    auto tg = TwistedGroupRingElement<PrimeField>::monomial(g, tr, g->parse("1"), t);
    auto th = TwistedGroupRingElement<PrimeField>::monomial(g, tr, g->parse("2"), t);
    EXPECT_EQ(embed_twisted(tg), parse_near_ring("X[1]^2", g, f2));
    EXPECT_EQ(embed_twisted(tg * th), star(embed_twisted(tg), embed_twisted(th)));
    EXPECT_EQ(embed_twisted(tg * th), parse_near_ring("X[3]^4", g, f2));
    auto one = TwistedGroupRingElement<PrimeField>::one(g, tr);
    EXPECT_EQ(embed_twisted(one), NearRingElement<PrimeField>::identity(g, f2));
}

TEST(Embeddings, TwistedAgreesWithIotaOnConstants)
{
    // coefficients of degree 0 in t: j restricted to K[G] is iota
    std::mt19937_64 rng(5);
    auto g = Group::free_abelian(2);
    PrimeField f3(3);
    for (int i = 0; i < 100; ++i) {
        auto a = nearca::testing::random_group_ring(g, f3, 4, rng);
        TwistedGroupRingElement<PrimeField> t(g, TwistedRing<PrimeField>{f3});
        for (const auto& [h, c] : a.terms()) {
            t.add_term(h, TwistedPoly<PrimeField>::constant(f3, c));
        }
        EXPECT_EQ(embed_twisted(t), embed_group_ring(a));
    }
}

TEST(LeadingTerms, Examples)
{
    auto g = z1();
    auto order = MonomialOrder::for_group(*g);
    auto lt = leading_term(q_poly("X[2] + X[1]^3"), order);
    EXPECT_TRUE(lt.coefficient == Rational(1));
    EXPECT_EQ(lt.exponent, ExponentVector::dirac(g->parse("2")));
    auto c = leading_term(q_poly("5"), order);
    EXPECT_TRUE(c.coefficient == Rational(5));
    EXPECT_TRUE(c.exponent.is_zero());
    EXPECT_THROW(leading_term(NR::zero(g, Q{}), order), error);

    auto a = q_poly("X[(1)]^3*X[(0)] + 1");
    auto b = q_poly("X[(2)]^2 - X[(3)]^2");
    auto la = leading_term(a, order), lb = leading_term(b, order);
    auto lp = leading_term(star(a, b), order);
    EXPECT_EQ(lp.exponent, exp_convolve(*g, la.exponent, lb.exponent));
    EXPECT_TRUE(lp.coefficient == la.coefficient * power(lb.coefficient, la.exponent.total_degree()));
}

TEST(Units, ClassificationExamples)
{
    auto g = z1();
    auto c = classify_unit_pair(q_poly("2*X[1] - 6"), q_poly("1/2*X[-1] + 3"));
    EXPECT_EQ(c.kind, UnitKind::trivial_unit);
    EXPECT_TRUE(*c.a == Rational(2));
    EXPECT_EQ(*c.g, g->parse("1"));
    EXPECT_TRUE(*c.b == Rational(3));
    EXPECT_EQ(c.product, q_poly("X[0]"));

    auto d = classify_unit_pair(q_poly("X[0]"), q_poly("X[0]"));
    EXPECT_EQ(d.kind, UnitKind::trivial_unit);
    EXPECT_TRUE(d.b->is_zero());
    EXPECT_EQ(classify_unit_pair(q_poly("X[0]^2"), q_poly("X[0]")).kind, UnitKind::not_a_unit_pair);
}

// Order compatibility (i)-(iv) and the leading-term product formula.
class OrderCompatibility : public ::testing::TestWithParam<const char*> {
protected:
    GroupPtr group() const { return parse_group_descriptor(GetParam()); }
};

TEST_P(OrderCompatibility, HoldsOnRandomExponentVectors)
{
    auto g = group();
    auto order = MonomialOrder::for_group(*g);
    auto lt = [&](const ExponentVector& a, const ExponentVector& b) { return order.less(*g, a, b); };
    auto support = ball(*g, 2);
    std::mt19937_64 rng(7);
    const ExponentVector zero;
    for (int i = 0; i < 1000; ++i) {
        auto u = random_exponent(support, 3, rng);
        auto v = random_exponent(support, 3, rng);
        auto w = random_exponent(support, 3, rng);
        auto x = random_element(*g, rng, 2);
        if (!w.is_zero()) {
            EXPECT_TRUE(lt(zero, w));                         // (i)
            EXPECT_TRUE(lt(u, u + w));                        // (ii)
        }
        EXPECT_EQ(lt(u, v), lt(shift(*g, x, u), shift(*g, x, v))); // (iii)
        EXPECT_EQ(lt(u, v), lt(u + w, v + w));
        if (lt(u, v) && !w.is_zero()) {                        // (iv)
            EXPECT_TRUE(lt(exp_convolve(*g, u, w), exp_convolve(*g, v, w)));
            EXPECT_TRUE(lt(exp_convolve(*g, w, u), exp_convolve(*g, w, v)));
        }
        EXPECT_EQ(order.compare(*g, u, v) == 0, u == v);
    }
}

TEST_P(OrderCompatibility, LeadingTermProductFormula)
{
    auto g = group();
    auto order = MonomialOrder::for_group(*g);
    std::mt19937_64 rng(8);
    auto support = ball(*g, 1);
    auto check = [&](const auto& field) {
        for (int i = 0; i < 100; ++i) {
            auto a = random_nonconstant(g, field, support, 2, 3, rng);
            auto b = random_nonconstant(g, field, support, 2, 3, rng);
            auto la = leading_term(a, order), lb = leading_term(b, order);
            auto p = star(a, b);
            ASSERT_FALSE(p.is_zero());
            auto lp = leading_term(p, order);
            EXPECT_EQ(lp.exponent, exp_convolve(*g, la.exponent, lb.exponent));
            EXPECT_TRUE(lp.coefficient == la.coefficient * power(lb.coefficient, la.exponent.total_degree()));
        }
    };
    check(Q{});
    check(PrimeField(5));
}

INSTANTIATE_TEST_SUITE_P(OrderableGroups, OrderCompatibility, ::testing::Values("zd:1", "zd:2", "free:2"),
                         [](const auto& info) {
                             std::string s = info.param;
                             return s == "zd:1" ? std::string("Z") : s == "zd:2" ? std::string("Z2") : std::string("Free2");
                         });
