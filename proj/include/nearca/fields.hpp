#pragma once

// Exact coefficient fields: the rationals, prime fields F_p and the small
// Galois fields F_{p^k} (p in {2,3,5}, k <= 4) built from fixed Conway
// polynomials.

#include <array>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "nearca/error.hpp"

namespace nearca {

// ---------------------------------------------------------------------------
// Rational numbers

class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : q_(static_cast<long>(n)) {} // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den)
    {
        if (den == 0) {
            throw error("rational with zero denominator");
        }
        q_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
        q_.canonicalize();
    }
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    const mpq_class& value() const noexcept { return q_; }
    bool is_zero() const noexcept { return sgn(q_) == 0; }
    int sign() const noexcept { return sgn(q_); }

    Rational inverse() const
    {
        if (is_zero()) {
            throw error("inverse of zero");
        }
        return Rational(mpq_class(1) / q_);
    }
    Rational zero_like() const { return Rational(0); }
    Rational one_like() const { return Rational(1); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
    friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }
    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& b) { q_ += b.q_; return *this; }
    Rational& operator-=(const Rational& b) { q_ -= b.q_; return *this; }
    Rational& operator*=(const Rational& b) { q_ *= b.q_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }

    std::string str() const { return q_.get_str(); }

    /// Decimal rendering with `digits` places after the point (truncated toward zero).
    std::string decimal(int digits = 6) const
    {
        mpz_class scale = 1;
        for (int i = 0; i < digits; ++i) {
            scale *= 10;
        }
        mpz_class scaled = (q_.get_num() * scale) / q_.get_den();
        bool neg = scaled < 0;
        if (neg) {
            scaled = -scaled;
        }
        std::string s = scaled.get_str();
        if (static_cast<int>(s.size()) <= digits) {
            s.insert(0, static_cast<std::size_t>(digits + 1) - s.size(), '0');
        }
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
        return (neg ? "-" : "") + s;
    }

private:
    mpq_class q_{0};
};

// ---------------------------------------------------------------------------
// Prime field elements carry their modulus.

class Fp {
public:
    Fp() = default;
    Fp(std::int64_t v, std::uint32_t p) : p_(p)
    {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        if (r < 0) {
            r += p;
        }
        v_ = static_cast<std::uint32_t>(r);
    }

    std::uint32_t value() const noexcept { return v_; }
    std::uint32_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return v_ == 0; }

    Fp inverse() const
    {
        if (v_ == 0) {
            throw error("inverse of zero");
        }
        // Fermat: a^(p-2)
        std::uint64_t base = v_, acc = 1, e = p_ - 2;
        while (e) {
            if (e & 1) {
                acc = acc * base % p_;
            }
            base = base * base % p_;
            e >>= 1;
        }
        return raw(static_cast<std::uint32_t>(acc), p_);
    }
    Fp zero_like() const { return raw(0, p_); }
    Fp one_like() const { return raw(1 % p_, p_); }

    friend Fp operator+(Fp a, Fp b)
    {
        check(a, b);
        std::uint32_t s = a.v_ + b.v_;
        return raw(s >= a.p_ ? s - a.p_ : s, a.p_);
    }
    friend Fp operator-(Fp a, Fp b)
    {
        check(a, b);
        return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_, a.p_);
    }
    friend Fp operator*(Fp a, Fp b)
    {
        check(a, b);
        return raw(static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.v_) * b.v_ % a.p_), a.p_);
    }
    friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
    Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_, p_); }
    Fp& operator+=(Fp b) { return *this = *this + b; }
    Fp& operator-=(Fp b) { return *this = *this - b; }
    Fp& operator*=(Fp b) { return *this = *this * b; }
    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_ && a.p_ == b.p_; }

private:
    static Fp raw(std::uint32_t v, std::uint32_t p)
    {
        Fp r;
        r.v_ = v;
        r.p_ = p;
        return r;
    }
    static void check(Fp a, Fp b)
    {
        if (a.p_ != b.p_) {
            throw mismatch_error("prime field elements with different moduli");
        }
    }

    std::uint32_t v_ = 0;
    std::uint32_t p_ = 2;
};

// ---------------------------------------------------------------------------
// F_{p^k}: elements are coded as sum c_i p^i for the polynomial sum c_i w^i
// modulo the Conway polynomial; multiplication through discrete log tables.

struct GfTables {
    std::uint32_t p = 0;
    std::uint32_t k = 0;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> modulus; // monic, low to high, size k+1
    std::vector<std::uint32_t> exp;     // exp[i] = code of w^i, size q-1
    std::vector<std::uint32_t> log;     // log[code], size q, log[0] unused

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const
    {
        std::uint32_t r = 0, scale = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            r += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        return r;
    }
    std::uint32_t neg(std::uint32_t a) const
    {
        std::uint32_t r = 0, scale = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            r += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        return r;
    }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
    {
        if (a == 0 || b == 0) {
            return 0;
        }
        return exp[(log[a] + log[b]) % (q - 1)];
    }
    std::uint32_t inv(std::uint32_t a) const
    {
        if (a == 0) {
            throw error("inverse of zero");
        }
        return exp[(q - 1 - log[a]) % (q - 1)];
    }
    std::uint32_t digit(std::uint32_t code, std::uint32_t i) const
    {
        for (std::uint32_t j = 0; j < i; ++j) {
            code /= p;
        }
        return code % p;
    }
};

namespace detail {

inline GfTables build_gf(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus)
{
    GfTables t;
    t.p = p;
    t.k = k;
    t.q = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        t.q *= p;
    }
    t.modulus = std::move(modulus);
    t.exp.resize(t.q - 1);
    t.log.assign(t.q, 0);
    std::vector<std::uint32_t> cur(k, 0); // coefficients of w^i
    cur[0] = 1;
    std::vector<bool> seen(t.q, false);
    for (std::uint32_t i = 0; i + 1 < t.q; ++i) {
        std::uint32_t code = 0, scale = 1;
        for (std::uint32_t j = 0; j < k; ++j) {
            code += cur[j] * scale;
            scale *= p;
        }
        if (code == 0 || seen[code]) {
            throw error("Conway polynomial is not primitive");
        }
        seen[code] = true;
        t.exp[i] = code;
        t.log[code] = i;
        // multiply by w and reduce with w^k = -(m_0 + ... + m_{k-1} w^{k-1})
        if (k == 1) {
            std::uint32_t root = (p - t.modulus[0] % p) % p;
            cur[0] = cur[0] * root % p;
        } else {
            std::uint32_t top = cur[k - 1];
            for (std::uint32_t j = k - 1; j > 0; --j) {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for (std::uint32_t j = 0; j < k; ++j) {
                cur[j] = (cur[j] + (p - t.modulus[j] % p) * top) % p;
            }
        }
    }
    return t;
}

inline const std::vector<GfTables>& all_gf_tables()
{
    static const std::vector<GfTables> tables = [] {
        std::vector<GfTables> v;
        v.push_back(build_gf(2, 1, {1, 1}));
        v.push_back(build_gf(2, 2, {1, 1, 1}));
        v.push_back(build_gf(2, 3, {1, 1, 0, 1}));
        v.push_back(build_gf(2, 4, {1, 1, 0, 0, 1}));
        v.push_back(build_gf(3, 1, {1, 1}));
        v.push_back(build_gf(3, 2, {2, 2, 1}));
        v.push_back(build_gf(3, 3, {1, 2, 0, 1}));
        v.push_back(build_gf(3, 4, {2, 0, 0, 2, 1}));
        v.push_back(build_gf(5, 1, {3, 1}));
        v.push_back(build_gf(5, 2, {2, 4, 1}));
        v.push_back(build_gf(5, 3, {3, 3, 0, 1}));
        v.push_back(build_gf(5, 4, {2, 4, 4, 0, 1}));
        return v;
    }();
    return tables;
}

} // namespace detail

inline const GfTables& gf_tables(std::uint32_t p, std::uint32_t k)
{
    for (const auto& t : detail::all_gf_tables()) {
        if (t.p == p && t.k == k) {
            return t;
        }
    }
    throw unsupported_error("GF(" + std::to_string(p) + "^" + std::to_string(k) +
                            ") is not shipped (p in {2,3,5}, k <= 4)");
}

class Gf {
public:
    Gf() = default;
    Gf(std::uint32_t code, const GfTables* t) : code_(code), t_(t) {}

    std::uint32_t code() const noexcept { return code_; }
    const GfTables* tables() const noexcept { return t_; }
    bool is_zero() const noexcept { return code_ == 0; }

    Gf inverse() const { return {t_->inv(code_), t_}; }
    Gf zero_like() const { return {0, t_}; }
    Gf one_like() const { return {1, t_}; }

    friend Gf operator+(Gf a, Gf b) { check(a, b); return {a.t_->add(a.code_, b.code_), a.t_}; }
    friend Gf operator-(Gf a, Gf b) { check(a, b); return {a.t_->add(a.code_, a.t_->neg(b.code_)), a.t_}; }
    friend Gf operator*(Gf a, Gf b) { check(a, b); return {a.t_->mul(a.code_, b.code_), a.t_}; }
    friend Gf operator/(Gf a, Gf b) { return a * b.inverse(); }
    Gf operator-() const { return {t_->neg(code_), t_}; }
    Gf& operator+=(Gf b) { return *this = *this + b; }
    Gf& operator-=(Gf b) { return *this = *this - b; }
    Gf& operator*=(Gf b) { return *this = *this * b; }
    friend bool operator==(Gf a, Gf b) { return a.code_ == b.code_ && a.t_ == b.t_; }

private:
    static void check(Gf a, Gf b)
    {
        if (a.t_ != b.t_) {
            throw mismatch_error("Galois field elements from different fields");
        }
    }

    std::uint32_t code_ = 0;
    const GfTables* t_ = nullptr;
};

// ---------------------------------------------------------------------------
// Field contexts. A context knows how to make constants, how to print and
// (for finite fields) how to enumerate its elements.

template <class F>
concept ExactField = requires(const F& f, const typename F::element& a, std::int64_t n) {
    { f.zero() } -> std::same_as<typename F::element>;
    { f.one() } -> std::same_as<typename F::element>;
    { f.from_int(n) } -> std::same_as<typename F::element>;
    { f.characteristic() } -> std::convertible_to<std::uint64_t>;
    { f.cardinality() } -> std::convertible_to<std::uint64_t>;
    { f.name() } -> std::convertible_to<std::string>;
    { f.format(a) } -> std::convertible_to<std::string>;
    { a + a } -> std::same_as<typename F::element>;
    { a - a } -> std::same_as<typename F::element>;
    { a * a } -> std::same_as<typename F::element>;
    { -a } -> std::same_as<typename F::element>;
    { a.inverse() } -> std::same_as<typename F::element>;
    { a.is_zero() } -> std::same_as<bool>;
    { a == a } -> std::same_as<bool>;
};

template <class F>
concept FiniteExactField = ExactField<F> && requires(const F& f, std::uint64_t i, const typename F::element& a) {
    { f.element_at(i) } -> std::same_as<typename F::element>;
    { f.index_of(a) } -> std::convertible_to<std::uint64_t>;
};

struct RationalField {
    using element = Rational;

    Rational zero() const { return Rational(0); }
    Rational one() const { return Rational(1); }
    Rational from_int(std::int64_t n) const { return Rational(n); }
    Rational from_fraction(std::int64_t num, std::int64_t den) const { return Rational(num, den); }
    std::uint64_t characteristic() const { return 0; }
    std::uint64_t cardinality() const { return 0; }
    std::string name() const { return "QQ"; }
    std::string format(const Rational& a) const { return a.str(); }
    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

struct PrimeField {
    using element = Fp;

    explicit PrimeField(std::uint32_t p = 2) : p(p)
    {
        if (p < 2) {
            throw error("prime field modulus must be >= 2");
        }
        for (std::uint32_t d = 2; d * d <= p; ++d) {
            if (p % d == 0) {
                throw error("modulus " + std::to_string(p) + " is not prime");
            }
        }
    }

    std::uint32_t p;

    Fp zero() const { return Fp(0, p); }
    Fp one() const { return Fp(1, p); }
    Fp from_int(std::int64_t n) const { return Fp(n, p); }
    std::uint64_t characteristic() const { return p; }
    std::uint64_t cardinality() const { return p; }
    std::string name() const { return "GF(" + std::to_string(p) + ")"; }
    std::string format(const Fp& a) const { return std::to_string(a.value()); }
    Fp element_at(std::uint64_t i) const { return Fp(static_cast<std::int64_t>(i), p); }
    std::uint64_t index_of(const Fp& a) const { return a.value(); }
    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p == b.p; }
};

struct GaloisField {
    using element = Gf;

    GaloisField(std::uint32_t p, std::uint32_t k) : t(&gf_tables(p, k)) {}

    const GfTables* t;

    Gf zero() const { return {0, t}; }
    Gf one() const { return {1, t}; }
    Gf from_int(std::int64_t n) const
    {
        std::int64_t r = n % static_cast<std::int64_t>(t->p);
        if (r < 0) {
            r += t->p;
        }
        return {static_cast<std::uint32_t>(r), t};
    }
    /// The class of w, a root of the Conway polynomial (a primitive element).
    Gf generator() const { return {t->exp.size() > 1 ? t->exp[1] : t->exp[0], t}; }
    std::uint64_t characteristic() const { return t->p; }
    std::uint64_t cardinality() const { return t->q; }
    std::uint32_t degree() const { return t->k; }
    std::string name() const { return "GF(" + std::to_string(t->q) + ")"; }
    std::string format(const Gf& a) const
    {
        if (a.is_zero()) {
            return "0";
        }
        std::string out;
        for (std::uint32_t i = t->k; i-- > 0;) {
            std::uint32_t c = t->digit(a.code(), i);
            if (c == 0) {
                continue;
            }
            if (!out.empty()) {
                out += "+";
            }
            if (i == 0) {
                out += std::to_string(c);
            } else {
                if (c != 1) {
                    out += std::to_string(c) + "*";
                }
                out += i == 1 ? std::string("w") : "w^" + std::to_string(i);
            }
        }
        return out;
    }
    Gf element_at(std::uint64_t i) const { return {static_cast<std::uint32_t>(i), t}; }
    std::uint64_t index_of(const Gf& a) const { return a.code(); }
    friend bool operator==(const GaloisField& a, const GaloisField& b) { return a.t == b.t; }
};

static_assert(ExactField<RationalField>);
static_assert(FiniteExactField<PrimeField>);
static_assert(FiniteExactField<GaloisField>);

// ---------------------------------------------------------------------------

template <class E>
E power(const E& a, std::uint64_t n)
{
    E acc = a.one_like();
    E base = a;
    while (n) {
        if (n & 1U) {
            acc = acc * base;
        }
        n >>= 1U;
        if (n) {
            base = base * base;
        }
    }
    return acc;
}

/// a^(p^n) in a field of characteristic p > 0.
template <ExactField F>
typename F::element frobenius(const F& field, const typename F::element& a, std::uint64_t n)
{
    std::uint64_t p = field.characteristic();
    if (p == 0) {
        throw unsupported_error("Frobenius needs positive characteristic");
    }
    typename F::element r = a;
    for (std::uint64_t i = 0; i < n; ++i) {
        r = power(r, p);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Runtime field selection and the standalone scalar text form
// (`3/4`, `2 mod 5`, `w+1 in GF(4)`).

using AnyField = std::variant<RationalField, PrimeField, GaloisField>;
using Scalar = std::variant<Rational, Fp, Gf>;

namespace detail {

inline std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\n' || s[b] == '\r')) {
        ++b;
    }
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\n' || s[e - 1] == '\r')) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

inline std::uint64_t parse_uint(std::string_view s, std::size_t base_offset = 0)
{
    if (s.empty()) {
        throw parse_error("expected a number", base_offset);
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            throw parse_error("expected a digit", base_offset + i);
        }
        v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
    }
    return v;
}

} // namespace detail

/// Accepts `QQ`, `Q`, `GF(q)` and `Fq` for prime powers q with shipped tables.
inline AnyField parse_field(std::string_view text)
{
    std::string s = detail::trim(text);
    if (s == "QQ" || s == "Q") {
        return RationalField{};
    }
    std::string digits;
    if (s.size() > 4 && s.rfind("GF(", 0) == 0 && s.back() == ')') {
        digits = s.substr(3, s.size() - 4);
    } else if (s.size() > 1 && s[0] == 'F') {
        digits = s.substr(1);
    } else {
        throw parse_error("unknown field '" + s + "'", 0);
    }
    std::uint64_t q = detail::parse_uint(digits);
    for (std::uint32_t p : {2U, 3U, 5U, 7U, 11U, 13U}) {
        std::uint64_t pk = p;
        for (std::uint32_t k = 1; k <= 4 && pk <= q; ++k, pk *= p) {
            if (pk == q) {
                return k == 1 ? AnyField(PrimeField(p)) : AnyField(GaloisField(p, k));
            }
        }
    }
    if (q >= 2 && q < (1ULL << 31)) {
        return PrimeField(static_cast<std::uint32_t>(q)); // throws if not prime
    }
    throw parse_error("unsupported field size " + digits, 0);
}

inline std::string field_name(const AnyField& f)
{
    return std::visit([](const auto& x) { return x.name(); }, f);
}

inline std::string to_string(const Scalar& s)
{
    struct V {
        std::string operator()(const Rational& r) const { return r.str(); }
        std::string operator()(const Fp& a) const
        {
            return std::to_string(a.value()) + " mod " + std::to_string(a.modulus());
        }
        std::string operator()(const Gf& a) const
        {
            GaloisField f(a.tables()->p, a.tables()->k);
            return f.format(a) + " in " + f.name();
        }
    };
    return std::visit(V{}, s);
}

/// Parses an element of F_q written as a polynomial in `w` (e.g. `2*w^2+w+1`).
inline Gf parse_gf_polynomial(const GaloisField& f, std::string_view text)
{
    std::string s;
    for (char c : text) {
        if (c != ' ') {
            s += c;
        }
    }
    if (s.empty()) {
        throw parse_error("empty field literal", 0);
    }
    Gf acc = f.zero();
    std::size_t i = 0;
    while (i < s.size()) {
        bool neg = false;
        if (s[i] == '+' || s[i] == '-') {
            neg = s[i] == '-';
            ++i;
        }
        std::size_t start = i;
        std::int64_t coef = 1;
        bool have_coef = false;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            ++i;
        }
        if (i > start) {
            coef = static_cast<std::int64_t>(detail::parse_uint(std::string_view(s).substr(start, i - start), start));
            have_coef = true;
        }
        std::uint64_t e = 0;
        if (i < s.size() && s[i] == '*') {
            ++i;
        }
        if (i < s.size() && s[i] == 'w') {
            ++i;
            e = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t es = i;
                while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
                    ++i;
                }
                e = detail::parse_uint(std::string_view(s).substr(es, i - es), es);
            }
        } else if (!have_coef) {
            throw parse_error("expected a coefficient or w", i);
        }
        Gf term = f.from_int(coef) * power(f.generator(), e);
        acc = neg ? acc - term : acc + term;
        if (i < s.size() && s[i] != '+' && s[i] != '-') {
            throw parse_error("unexpected character in field literal", i);
        }
    }
    return acc;
}

inline Scalar parse_scalar(std::string_view text)
{
    std::string s = detail::trim(text);
    if (auto pos = s.find(" in "); pos != std::string::npos) {
        AnyField f = parse_field(s.substr(pos + 4));
        std::string lit = s.substr(0, pos);
        if (auto* g = std::get_if<GaloisField>(&f)) {
            return parse_gf_polynomial(*g, lit);
        }
        if (auto* p = std::get_if<PrimeField>(&f)) {
            bool neg = !lit.empty() && lit[0] == '-';
            auto v = static_cast<std::int64_t>(detail::parse_uint(neg ? lit.substr(1) : lit));
            return p->from_int(neg ? -v : v);
        }
        throw parse_error("field annotation must name a finite field", pos);
    }
    if (auto pos = s.find(" mod "); pos != std::string::npos) {
        std::string lit = detail::trim(s.substr(0, pos));
        bool neg = !lit.empty() && lit[0] == '-';
        auto v = static_cast<std::int64_t>(detail::parse_uint(neg ? lit.substr(1) : lit));
        auto p = detail::parse_uint(detail::trim(s.substr(pos + 5)), pos + 5);
        return PrimeField(static_cast<std::uint32_t>(p)).from_int(neg ? -v : v);
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0) {
        throw parse_error("malformed rational '" + s + "'", 0);
    }
    if (q.get_den() == 0) {
        throw parse_error("zero denominator", 0);
    }
    return Rational(q);
}

} // namespace nearca
