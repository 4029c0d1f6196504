#pragma once

// Twisted polynomials K[t; F] over a field of characteristic p, where
// t * a = a^p * t.

#include <string>
#include <vector>

#include "nearca/error.hpp"
#include "nearca/fields.hpp"

namespace nearca {

template <ExactField F>
class TwistedPoly {
public:
    using element = typename F::element;

    explicit TwistedPoly(F field) : field_(std::move(field))
    {
        if (field_.characteristic() == 0) {
            throw unsupported_error("twisted polynomials need positive characteristic");
        }
    }
    TwistedPoly(F field, std::vector<element> coeffs) : TwistedPoly(std::move(field))
    {
        coeffs_ = std::move(coeffs);
        trim();
    }

    static TwistedPoly constant(F field, element a) { return TwistedPoly(std::move(field), {std::move(a)}); }

    /// The variable t.
    static TwistedPoly t(F field)
    {
        auto z = field.zero();
        auto o = field.one();
        return TwistedPoly(std::move(field), {z, o});
    }

    const F& field() const noexcept { return field_; }
    const std::vector<element>& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
    element coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : field_.zero(); }

    friend TwistedPoly operator+(const TwistedPoly& a, const TwistedPoly& b)
    {
        a.check(b);
        std::vector<element> c(std::max(a.coeffs_.size(), b.coeffs_.size()), a.field_.zero());
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = a.coefficient(i) + b.coefficient(i);
        }
        return TwistedPoly(a.field_, std::move(c));
    }

    TwistedPoly operator-() const
    {
        std::vector<element> c;
        for (const auto& x : coeffs_) {
            c.push_back(-x);
        }
        return TwistedPoly(field_, std::move(c));
    }

    friend TwistedPoly operator-(const TwistedPoly& a, const TwistedPoly& b) { return a + (-b); }

    /// (sum a_i t^i)(sum b_j t^j) = sum a_i b_j^(p^i) t^(i+j)
    friend TwistedPoly operator*(const TwistedPoly& a, const TwistedPoly& b)
    {
        a.check(b);
        if (a.is_zero() || b.is_zero()) {
            return TwistedPoly(a.field_);
        }
        std::vector<element> c(a.coeffs_.size() + b.coeffs_.size() - 1, a.field_.zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                c[i + j] = c[i + j] + a.coeffs_[i] * frobenius(a.field_, b.coeffs_[j], i);
            }
        }
        return TwistedPoly(a.field_, std::move(c));
    }

    friend bool operator==(const TwistedPoly& a, const TwistedPoly& b)
    {
        return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
    }

    std::string str() const
    {
        if (is_zero()) {
            return "0";
        }
        std::string out;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            if (coeffs_[i].is_zero()) {
                continue;
            }
            if (!out.empty()) {
                out += " + ";
            }
            std::string c = field_.format(coeffs_[i]);
            if (i == 0) {
                out += c;
            } else {
                if (!(coeffs_[i] == field_.one())) {
                    out += "(" + c + ")*";
                }
                out += i == 1 ? "t" : "t^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) {
            coeffs_.pop_back();
        }
    }

    void check(const TwistedPoly& b) const
    {
        if (!(field_ == b.field_)) {
            throw mismatch_error("twisted polynomials over different fields");
        }
    }

    F field_;
    std::vector<element> coeffs_;
};

template <ExactField F>
TwistedPoly<F> twisted_multiply(const TwistedPoly<F>& a, const TwistedPoly<F>& b)
{
    return a * b;
}

} // namespace nearca
