#pragma once

// Expression syntax for near-ring and group-ring elements:
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := power (('*'|'/') power)*
//   power   := primary ['^' integer]
//   primary := integer | 'w' | 'X[' element ']' | '[' element ']' | '(' expr ')'
// `X[g]` is the near-ring variable X_g, `[g]` the group-ring basis element g,
// `w` the generator of GF(p^k). Division is by nonzero constants only.
// Whitespace is ignored; error offsets refer to the original text.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nearca/error.hpp"
#include "nearca/fields.hpp"
#include "nearca/group_ring.hpp"
#include "nearca/groups.hpp"
#include "nearca/near_ring.hpp"

namespace nearca {

struct ExprNode {
    enum class Kind { number, generator, variable, basis, neg, add, sub, mul, div, pow } kind;
    std::string text;            // digits for numbers, element literal for variable/basis
    std::uint64_t exponent = 0;  // for pow
    std::size_t offset = 0;      // position in the source text
    std::vector<std::unique_ptr<ExprNode>> kids;
};

using ParsedExpression = std::unique_ptr<ExprNode>;

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : src_(src) {}

    ParsedExpression parse()
    {
        auto e = expr();
        skip();
        if (pos_ < src_.size()) {
            fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        if (pos_ >= src_.size()) {
            // an unexpected end is reported at the last character
            throw parse_error("unexpected end of input, " + what, src_.empty() ? 0 : src_.size() - 1);
        }
        throw parse_error(what, pos_);
    }

    void skip()
    {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static ParsedExpression node(ExprNode::Kind k, std::size_t off)
    {
        auto n = std::make_unique<ExprNode>();
        n->kind = k;
        n->offset = off;
        return n;
    }

    static ParsedExpression binary(ExprNode::Kind k, ParsedExpression a, ParsedExpression b, std::size_t off)
    {
        auto n = node(k, off);
        n->kids.push_back(std::move(a));
        n->kids.push_back(std::move(b));
        return n;
    }

    ParsedExpression expr()
    {
        skip();
        std::size_t off = pos_;
        ParsedExpression lhs;
        if (eat('-')) {
            lhs = node(ExprNode::Kind::neg, off);
            lhs->kids.push_back(term());
        } else {
            eat('+');
            lhs = term();
        }
        while (true) {
            skip();
            off = pos_;
            if (eat('+')) {
                lhs = binary(ExprNode::Kind::add, std::move(lhs), term(), off);
            } else if (eat('-')) {
                lhs = binary(ExprNode::Kind::sub, std::move(lhs), term(), off);
            } else {
                return lhs;
            }
        }
    }

    ParsedExpression term()
    {
        auto lhs = power();
        while (true) {
            skip();
            std::size_t off = pos_;
            if (eat('*')) {
                lhs = binary(ExprNode::Kind::mul, std::move(lhs), power(), off);
            } else if (eat('/')) {
                lhs = binary(ExprNode::Kind::div, std::move(lhs), power(), off);
            } else {
                return lhs;
            }
        }
    }

    ParsedExpression power()
    {
        auto base = primary();
        skip();
        std::size_t off = pos_;
        if (eat('^')) {
            skip();
            std::size_t st = pos_;
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
                ++pos_;
            }
            if (st == pos_) {
                fail("expected a non-negative integer exponent");
            }
            auto n = node(ExprNode::Kind::pow, off);
            n->exponent = parse_uint(src_.substr(st, pos_ - st), st);
            n->kids.push_back(std::move(base));
            return n;
        }
        return base;
    }

    std::string element_literal()
    {
        std::size_t st = pos_;
        while (pos_ < src_.size() && src_[pos_] != ']') {
            if (src_[pos_] == '[') {
                fail("nested '[' in a group element");
            }
            ++pos_;
        }
        if (pos_ >= src_.size()) {
            fail("expected ']'");
        }
        std::string lit(src_.substr(st, pos_ - st));
        ++pos_;
        return lit;
    }

    ParsedExpression primary()
    {
        skip();
        std::size_t off = pos_;
        if (pos_ >= src_.size()) {
            fail("expected a term");
        }
        char c = src_[pos_];
        if (c >= '0' && c <= '9') {
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
                ++pos_;
            }
            auto n = node(ExprNode::Kind::number, off);
            n->text = std::string(src_.substr(off, pos_ - off));
            return n;
        }
        if (c == 'w') {
            ++pos_;
            return node(ExprNode::Kind::generator, off);
        }
        if (c == 'X') {
            ++pos_;
            if (!eat('[')) {
                fail("expected '[' after X");
            }
            auto n = node(ExprNode::Kind::variable, off);
            n->offset = pos_;
            n->text = element_literal();
            return n;
        }
        if (c == '[') {
            ++pos_;
            auto n = node(ExprNode::Kind::basis, off);
            n->offset = pos_;
            n->text = element_literal();
            return n;
        }
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!eat(')')) {
                fail("expected ')'");
            }
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

template <class Algebra>
typename Algebra::value evaluate(const ExprNode& n, const Algebra& alg)
{
    using K = ExprNode::Kind;
    auto elem = [&](const std::string& lit) {
        try {
            return alg.group().parse(lit);
        } catch (const parse_error& e) {
            throw parse_error(std::string("unknown group element literal '") + lit + "'", n.offset);
        } catch (const mismatch_error& e) {
            throw parse_error(std::string("unknown group element literal '") + lit + "'", n.offset);
        }
    };
    switch (n.kind) {
    case K::number: {
        mpz_class z;
        z.set_str(n.text, 10);
        return alg.number(z, n.offset);
    }
    case K::generator:
        return alg.generator(n.offset);
    case K::variable:
        return alg.variable(elem(n.text), n.offset);
    case K::basis:
        return alg.basis(elem(n.text), n.offset);
    case K::neg:
        return alg.neg(evaluate(*n.kids[0], alg));
    case K::add:
        return alg.add(evaluate(*n.kids[0], alg), evaluate(*n.kids[1], alg));
    case K::sub:
        return alg.add(evaluate(*n.kids[0], alg), alg.neg(evaluate(*n.kids[1], alg)));
    case K::mul:
        return alg.mul(evaluate(*n.kids[0], alg), evaluate(*n.kids[1], alg));
    case K::div:
        return alg.div(evaluate(*n.kids[0], alg), evaluate(*n.kids[1], alg), n.offset);
    case K::pow:
        return alg.pow(evaluate(*n.kids[0], alg), n.exponent);
    }
    throw error("bad expression node");
}

template <ExactField F>
typename F::element field_integer(const F& field, const mpz_class& z, std::size_t offset)
{
    if constexpr (std::is_same_v<F, RationalField>) {
        (void)offset;
        return Rational(mpq_class(z));
    } else {
        mpz_class r = z % static_cast<unsigned long>(field.characteristic());
        (void)offset;
        return field.from_int(static_cast<std::int64_t>(r.get_si()));
    }
}

template <ExactField F>
typename F::element field_generator(const F& field, std::size_t offset)
{
    if constexpr (std::is_same_v<F, GaloisField>) {
        return field.generator();
    } else {
        throw parse_error("'w' is not an element of " + field.name(), offset);
    }
}

template <ExactField F>
struct NearRingAlgebra {
    using value = NearRingElement<F>;
    GroupPtr g;
    F f;

    const Group& group() const { return *g; }
    value constant(const typename F::element& c) const { return value::constant(g, f, c); }
    value number(const mpz_class& z, std::size_t off) const { return constant(field_integer(f, z, off)); }
    value generator(std::size_t off) const { return constant(field_generator(f, off)); }
    value variable(const GroupElement& x, std::size_t) const { return value::variable(g, f, x); }
    value basis(const GroupElement&, std::size_t off) const
    {
        throw parse_error("group-ring literal [..] in a near-ring expression; use X[..]", off);
    }
    value neg(const value& a) const { return -a; }
    value add(const value& a, const value& b) const { return a + b; }
    value mul(const value& a, const value& b) const { return a.poly_mul(b); }
    value pow(const value& a, std::uint64_t k) const { return a.poly_pow(k); }
    value div(const value& a, const value& b, std::size_t off) const
    {
        if (!b.is_constant() || b.is_zero()) {
            throw parse_error("division by a non-constant or zero", off);
        }
        return a.scaled(b.constant_term().inverse());
    }
};

template <ExactField F>
struct GroupRingAlgebra {
    using value = ScalarGroupRing<F>;
    GroupPtr g;
    F f;

    const Group& group() const { return *g; }
    value constant(const typename F::element& c) const
    {
        return value::monomial(g, ScalarRing<F>{f}, g->identity(), c);
    }
    value number(const mpz_class& z, std::size_t off) const { return constant(field_integer(f, z, off)); }
    value generator(std::size_t off) const { return constant(field_generator(f, off)); }
    value variable(const GroupElement&, std::size_t off) const
    {
        throw parse_error("near-ring variable X[..] in a group-ring expression; use [..]", off);
    }
    value basis(const GroupElement& x, std::size_t) const { return value::monomial(g, ScalarRing<F>{f}, x, f.one()); }
    value neg(const value& a) const { return -a; }
    value add(const value& a, const value& b) const { return a + b; }
    value mul(const value& a, const value& b) const { return a * b; }
    value pow(const value& a, std::uint64_t k) const
    {
        value acc = value::one(g, ScalarRing<F>{f});
        for (std::uint64_t i = 0; i < k; ++i) {
            acc = acc * a;
        }
        return acc;
    }
    value div(const value& a, const value& b, std::size_t off) const
    {
        const auto& t = b.terms();
        if (t.size() != 1 || !g->is_identity(t.begin()->first)) {
            throw parse_error("division by a non-constant or zero", off);
        }
        return a * constant(t.begin()->second.inverse());
    }
};

} // namespace detail

inline ParsedExpression parse_expression(std::string_view text)
{
    return detail::ExprParser(text).parse();
}

template <ExactField F>
NearRingElement<F> parse_near_ring(std::string_view text, const GroupPtr& group, const F& field)
{
    auto ast = parse_expression(text);
    return detail::evaluate(*ast, detail::NearRingAlgebra<F>{group, field});
}

template <ExactField F>
ScalarGroupRing<F> parse_group_ring(std::string_view text, const GroupPtr& group, const F& field)
{
    auto ast = parse_expression(text);
    return detail::evaluate(*ast, detail::GroupRingAlgebra<F>{group, field});
}

/// A constant expression evaluated in the field, e.g. `-1/2`, `w^2+1`.
template <ExactField F>
typename F::element parse_field_element(std::string_view text, const F& field)
{
    auto g = Group::free_abelian(0);
    auto v = parse_near_ring(text, g, field);
    if (!v.is_constant()) {
        throw parse_error("expected a constant", 0);
    }
    return v.constant_term();
}

} // namespace nearca
