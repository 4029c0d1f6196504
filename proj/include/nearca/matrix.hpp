#pragma once

// Exact dense matrices and a sparse row-echelon engine.
//
// All rank, kernel and solve routines go through RowEchelon, which keeps
// pivot rows sparse. The reduced row echelon form of a matrix is unique,
// so kernel bases and particular solutions do not depend on row order.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nearca/error.hpp"
#include "nearca/fields.hpp"

namespace nearca {

template <ExactField F>
class Matrix {
public:
    using element = typename F::element;

    Matrix() = default;
    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero())
    {
    }

    static Matrix identity(F field, std::size_t n)
    {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = field.one();
        }
        return m;
    }

    static Matrix from_rows(F field, const std::vector<std::vector<std::int64_t>>& rows)
    {
        std::size_t c = rows.empty() ? 0 : rows.front().size();
        Matrix m(field, rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) {
                throw mismatch_error("ragged matrix rows");
            }
            for (std::size_t j = 0; j < c; ++j) {
                m(i, j) = field.from_int(rows[i][j]);
            }
        }
        return m;
    }

    const F& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    element& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const element& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const element& e) { return e.is_zero(); });
    }
    bool is_identity() const
    {
        if (rows_ != cols_) {
            return false;
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                const element& e = (*this)(i, j);
                if (i == j ? !(e == field_.one()) : !e.is_zero()) {
                    return false;
                }
            }
        }
        return true;
    }

    Matrix transpose() const
    {
        Matrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        a.check_same_shape(b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.data_.size(); ++i) {
            r.data_[i] = r.data_[i] + b.data_[i];
        }
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        a.check_same_shape(b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.data_.size(); ++i) {
            r.data_[i] = r.data_[i] - b.data_[i];
        }
        return r;
    }
    Matrix operator-() const
    {
        Matrix r = *this;
        for (auto& e : r.data_) {
            e = -e;
        }
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) {
            throw mismatch_error("matrix product shape mismatch: " + a.shape() + " * " + b.shape());
        }
        Matrix r(a.field_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const element& aik = a(i, k);
                if (aik.is_zero()) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (!b(k, j).is_zero()) {
                        r(i, j) = r(i, j) + aik * b(k, j);
                    }
                }
            }
        }
        return r;
    }
    friend Matrix operator*(const element& s, const Matrix& a)
    {
        Matrix r = a;
        for (auto& e : r.data_) {
            e = s * e;
        }
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Matrix-vector product.
    std::vector<element> apply(const std::vector<element>& v) const
    {
        if (v.size() != cols_) {
            throw mismatch_error("vector length does not match matrix columns");
        }
        std::vector<element> out(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!(*this)(i, j).is_zero() && !v[j].is_zero()) {
                    out[i] = out[i] + (*this)(i, j) * v[j];
                }
            }
        }
        return out;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    std::string str() const
    {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += i ? ",[" : "[";
            for (std::size_t j = 0; j < cols_; ++j) {
                s += (j ? "," : "") + field_.format((*this)(i, j));
            }
            s += "]";
        }
        return s + "]";
    }

private:
    void check_same_shape(const Matrix& b) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_) {
            throw mismatch_error("matrix shape mismatch: " + shape() + " vs " + b.shape());
        }
    }

    F field_{};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<element> data_;
};

// ---------------------------------------------------------------------------

template <ExactField F>
using SparseRow = std::vector<std::pair<std::size_t, typename F::element>>;

/// Incremental sparse row reduction. Rows are reduced against existing pivot
/// rows on insertion; independent rows become new pivots (normalized to a
/// leading one).
template <ExactField F>
class RowEchelon {
public:
    using element = typename F::element;
    using row_type = SparseRow<F>;
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    RowEchelon(F field, std::size_t cols) : field_(std::move(field)), cols_(cols), pivot_row_(cols, npos) {}

    std::size_t cols() const noexcept { return cols_; }
    std::size_t rank() const noexcept { return pivots_.size(); }

    /// Returns true when the row was independent of the rows inserted so far.
    bool insert(row_type row)
    {
        reduce(row);
        if (row.empty()) {
            return false;
        }
        element inv = row.front().second.inverse();
        for (auto& [c, v] : row) {
            v = v * inv;
        }
        pivot_row_[row.front().first] = pivots_.size();
        pivots_.push_back(std::move(row));
        reduced_ = false;
        return true;
    }

    /// Reduces `row` against the pivots (leading entries only).
    void reduce(row_type& row) const
    {
        while (!row.empty()) {
            std::size_t pr = pivot_row_[row.front().first];
            if (pr == npos) {
                return;
            }
            element factor = row.front().second;
            row = axpy(row, pivots_[pr], -factor);
        }
    }

    /// Full reduction: eliminates every pivot column from `row`.
    void reduce_fully(row_type& row) const
    {
        std::size_t pos = 0;
        while (pos < row.size()) {
            std::size_t pr = pivot_row_[row[pos].first];
            if (pr == npos) {
                ++pos;
                continue;
            }
            element factor = row[pos].second;
            std::size_t col = row[pos].first;
            row = axpy(row, pivots_[pr], -factor);
            pos = static_cast<std::size_t>(
                std::lower_bound(row.begin(), row.end(), col,
                                 [](const auto& e, std::size_t c) { return e.first < c; }) -
                row.begin());
        }
    }

    /// Brings the pivot rows to reduced row echelon form.
    void make_reduced()
    {
        if (reduced_) {
            return;
        }
        std::vector<std::size_t> order(pivots_.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return pivots_[a].front().first > pivots_[b].front().first;
        });
        for (std::size_t idx : order) {
            row_type& r = pivots_[idx];
            std::size_t lead = r.front().first;
            row_type tail(r.begin() + 1, r.end());
            reduce_fully(tail);
            tail.insert(tail.begin(), {lead, field_.one()});
            r = std::move(tail);
        }
        reduced_ = true;
    }

    /// Pivot rows sorted by leading column.
    std::vector<row_type> sorted_pivots()
    {
        make_reduced();
        std::vector<row_type> out = pivots_;
        std::sort(out.begin(), out.end(), [](const row_type& a, const row_type& b) {
            return a.front().first < b.front().first;
        });
        return out;
    }

    std::vector<std::size_t> pivot_columns() const
    {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (pivot_row_[c] != npos) {
                cols.push_back(c);
            }
        }
        return cols;
    }

    bool is_pivot_column(std::size_t c) const { return pivot_row_[c] != npos; }

    /// Kernel basis of the row space's annihilator: one vector per free column,
    /// in ascending free-column order.
    std::vector<std::vector<element>> kernel_basis()
    {
        make_reduced();
        std::vector<std::vector<element>> basis;
        for (std::size_t f = 0; f < cols_; ++f) {
            if (pivot_row_[f] != npos) {
                continue;
            }
            std::vector<element> v(cols_, field_.zero());
            v[f] = field_.one();
            for (const auto& row : pivots_) {
                auto it = std::lower_bound(row.begin(), row.end(), f,
                                           [](const auto& e, std::size_t c) { return e.first < c; });
                if (it != row.end() && it->first == f) {
                    v[row.front().first] = -it->second;
                }
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

    const row_type& pivot_for_column(std::size_t c) const { return pivots_[pivot_row_[c]]; }

private:
    row_type axpy(const row_type& a, const row_type& b, const element& s) const
    {
        row_type out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                out.emplace_back(b[j].first, s * b[j].second);
                ++j;
            } else {
                element v = a[i].second + s * b[j].second;
                if (!v.is_zero()) {
                    out.emplace_back(a[i].first, std::move(v));
                }
                ++i;
                ++j;
            }
        }
        return out;
    }

    F field_;
    std::size_t cols_;
    std::vector<std::size_t> pivot_row_;
    std::vector<row_type> pivots_;
    bool reduced_ = true;
};

/// Sparse matrix stored as rows; the form in which window matrices are built.
template <ExactField F>
struct SparseMatrix {
    F field;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SparseRow<F>> data;

    Matrix<F> to_dense() const
    {
        Matrix<F> m(field, rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (const auto& [c, v] : data[i]) {
                m(i, c) = v;
            }
        }
        return m;
    }
};

template <ExactField F>
SparseRow<F> sparse_row(const Matrix<F>& m, std::size_t i)
{
    SparseRow<F> r;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (!m(i, j).is_zero()) {
            r.emplace_back(j, m(i, j));
        }
    }
    return r;
}

template <ExactField F>
RowEchelon<F> echelon_of(const SparseMatrix<F>& m)
{
    RowEchelon<F> e(m.field, m.cols);
    for (const auto& r : m.data) {
        e.insert(r);
    }
    return e;
}

template <ExactField F>
RowEchelon<F> echelon_of(const Matrix<F>& m)
{
    RowEchelon<F> e(m.field(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        e.insert(sparse_row(m, i));
    }
    return e;
}

template <ExactField F>
struct RankKernel {
    std::size_t rank = 0;
    std::vector<std::vector<typename F::element>> kernel_basis;
};

/// Rank and a kernel basis (read off the reduced row echelon form).
template <ExactField F>
RankKernel<F> matrix_rank_kernel(const Matrix<F>& m)
{
    auto e = echelon_of(m);
    return {e.rank(), e.kernel_basis()};
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m)
{
    return echelon_of(m).rank();
}

template <ExactField F>
std::size_t rank(const SparseMatrix<F>& m)
{
    return echelon_of(m).rank();
}

template <ExactField F>
Matrix<F> reduced_row_echelon(const Matrix<F>& m)
{
    auto e = echelon_of(m);
    auto piv = e.sorted_pivots();
    Matrix<F> r(m.field(), m.rows(), m.cols());
    for (std::size_t i = 0; i < piv.size(); ++i) {
        for (const auto& [c, v] : piv[i]) {
            r(i, c) = v;
        }
    }
    return r;
}

/// Some X with A X = B (free variables set to zero), or nullopt.
template <ExactField F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b)
{
    if (a.rows() != b.rows()) {
        throw mismatch_error("solve: row count mismatch");
    }
    const std::size_t n = a.cols();
    RowEchelon<F> e(a.field(), n + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = sparse_row(a, i);
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (!b(i, j).is_zero()) {
                r.emplace_back(n + j, b(i, j));
            }
        }
        e.insert(std::move(r));
    }
    Matrix<F> x(a.field(), n, b.cols());
    for (const auto& row : e.sorted_pivots()) {
        std::size_t lead = row.front().first;
        if (lead >= n) {
            return std::nullopt;
        }
        for (const auto& [c, v] : row) {
            if (c >= n) {
                x(lead, c - n) = v;
            }
        }
    }
    return x;
}

} // namespace nearca
