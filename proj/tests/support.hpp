#pragma once

// Random inputs shared by the test suites.

#include <random>
#include <vector>

#include "nearca/nearca.hpp"

namespace nearca::testing {

inline GroupElement random_element(const Group& g, std::mt19937_64& rng, std::uint64_t radius = 2)
{
    auto b = ball(g, radius);
    return b[rng() % b.size()];
}

template <ExactField F>
typename F::element random_nonzero(const F& field, std::mt19937_64& rng)
{
    for (;;) {
        auto a = random_scalar(field, rng);
        if (!a.is_zero()) {
            return a;
        }
    }
}

inline ExponentVector random_exponent(const FiniteSubset& support, std::uint64_t max_degree, std::mt19937_64& rng)
{
    std::vector<ExponentVector::entry> e;
    std::uint64_t deg = rng() % (max_degree + 1);
    for (std::uint64_t i = 0; i < deg; ++i) {
        e.emplace_back(support[rng() % support.size()], 1);
    }
    return ExponentVector(std::move(e));
}

/// A random polynomial with at most `terms` terms, exponents supported in
/// `support`, total degree <= max_degree.
template <ExactField F>
NearRingElement<F> random_near_ring(const GroupPtr& g, const F& field, const FiniteSubset& support,
                                    std::uint64_t max_degree, std::size_t terms, std::mt19937_64& rng)
{
    auto r = NearRingElement<F>::zero(g, field);
    std::size_t k = 1 + rng() % terms;
    for (std::size_t i = 0; i < k; ++i) {
        r.add_term(random_exponent(support, max_degree, rng), random_scalar(field, rng));
    }
    return r;
}

template <ExactField F>
NearRingElement<F> random_nonconstant(const GroupPtr& g, const F& field, const FiniteSubset& support,
                                      std::uint64_t max_degree, std::size_t terms, std::mt19937_64& rng)
{
    for (;;) {
        auto r = random_near_ring(g, field, support, max_degree, terms, rng);
        if (!r.is_constant()) {
            return r;
        }
    }
}

template <ExactField F>
ScalarGroupRing<F> random_group_ring(const GroupPtr& g, const F& field, std::size_t terms, std::mt19937_64& rng,
                                     std::uint64_t radius = 2)
{
    ScalarGroupRing<F> r(g, ScalarRing<F>{field});
    std::size_t k = 1 + rng() % terms;
    for (std::size_t i = 0; i < k; ++i) {
        r.add_term(random_element(*g, rng, radius), random_scalar(field, rng));
    }
    return r;
}

template <ExactField F>
Matrix<F> random_matrix(const F& field, std::size_t rows, std::size_t cols, std::mt19937_64& rng)
{
    Matrix<F> m(field, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = random_scalar(field, rng);
        }
    }
    return m;
}

template <ExactField F>
MatrixGroupRing<F> random_matrix_group_ring(const GroupPtr& g, const F& field, std::size_t n, std::size_t terms,
                                            std::mt19937_64& rng, std::uint64_t radius = 1)
{
    MatrixGroupRing<F> r(g, MatrixRing<F>{field, n});
    std::size_t k = 1 + rng() % terms;
    for (std::size_t i = 0; i < k; ++i) {
        r.add_term(random_element(*g, rng, radius), random_matrix(field, n, n, rng));
    }
    return r;
}

template <ExactField F>
TwistedPoly<F> random_twisted(const F& field, std::size_t max_len, std::mt19937_64& rng)
{
    std::vector<typename F::element> c;
    std::size_t len = rng() % (max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
        c.push_back(random_scalar(field, rng));
    }
    return TwistedPoly<F>(field, std::move(c));
}

inline FiniteSubset elements(const Group& g, std::initializer_list<const char*> lits)
{
    std::vector<GroupElement> v;
    for (const char* s : lits) {
        v.push_back(g.parse(s));
    }
    return FiniteSubset(std::move(v));
}

// Gaussian elimination choosing pivots from the last column backwards, the
// opposite order to the library's echelon form.
template <ExactField F>
std::size_t rank_reverse_order(Matrix<F> m)
{
    std::size_t r = 0;
    for (std::size_t c = m.cols(); c-- > 0 && r < m.rows();) {
        std::size_t piv = m.rows();
        for (std::size_t i = m.rows(); i-- > r;) {
            if (!m(i, c).is_zero()) {
                piv = i;
                break;
            }
        }
        if (piv == m.rows()) {
            continue;
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::swap(m(r, j), m(piv, j));
        }
        auto inv = m(r, c).inverse();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) {
                continue;
            }
            auto f = m(i, c) * inv;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                m(i, j) = m(i, j) - f * m(r, j);
            }
        }
        ++r;
    }
    return r;
}

} // namespace nearca::testing
