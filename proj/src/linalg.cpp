#include "orbitcoh/linalg.hpp"

#include <algorithm>
#include <cassert>

namespace orbitcoh {

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vec>& columns)
{
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        assert(columns[j].size() == rows);
        for (std::size_t i = 0; i < rows; ++i)
            m(i, j) = columns[j][i];
    }
    return m;
}

Vec Matrix::row(std::size_t i) const
{
    return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
               data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vec Matrix::column(std::size_t j) const
{
    Vec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

bool Matrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](Coeff c) { return c == 0; });
}

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b)
{
    assert(a.cols() == b.rows());
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Coeff aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
        }
    return c;
}

Vec apply(const PrimeField& f, const Matrix& a, const Vec& v)
{
    assert(a.cols() == v.size());
    Vec out(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out[i] = f.add(out[i], f.mul(a(i, j), v[j]));
    return out;
}

bool is_zero(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](Coeff c) { return c == 0; });
}

void axpy(const PrimeField& f, Coeff c, const Vec& x, Vec& y)
{
    assert(x.size() == y.size());
    if (c == 0)
        return;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            y[i] = f.add(y[i], f.mul(c, x[i]));
}

Echelon row_reduce(const PrimeField& f, std::vector<Vec> rows, PivotOrder order)
{
    Echelon e;
    if (rows.empty())
        return e;
    const std::size_t n = rows.front().size();
    std::size_t next = 0;
    for (std::size_t step = 0; step < n && next < rows.size(); ++step) {
        const std::size_t col = order == PivotOrder::Leftmost ? step : n - 1 - step;
        std::size_t piv = next;
        while (piv < rows.size() && rows[piv][col] == 0)
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[next], rows[piv]);
        const Coeff scale = f.inv(rows[next][col]);
        for (auto& x : rows[next])
            x = f.mul(x, scale);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != next && rows[i][col] != 0)
                axpy(f, f.neg(rows[i][col]), rows[next], rows[i]);
        e.pivots.push_back(col);
        ++next;
    }
    rows.resize(next);
    e.rows = std::move(rows);
    return e;
}

void reduce_against(const PrimeField& f, const Echelon& e, Vec& v, Vec* coeffs)
{
    if (coeffs)
        coeffs->assign(e.rows.size(), 0);
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        const Coeff c = v[e.pivots[i]];
        if (c == 0)
            continue;
        axpy(f, f.neg(c), e.rows[i], v);
        if (coeffs)
            (*coeffs)[i] = c;
    }
}

std::size_t rank(const PrimeField& f, const Matrix& a)
{
    std::vector<Vec> rows;
    rows.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        rows.push_back(a.row(i));
    return row_reduce(f, std::move(rows)).rank();
}

std::vector<Vec> kernel(const PrimeField& f, const Matrix& a)
{
    const std::size_t n = a.cols();
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < a.rows(); ++i)
        rows.push_back(a.row(i));
    Echelon e = rows.empty() ? Echelon{} : row_reduce(f, std::move(rows));
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free])
            continue;
        Vec v(n, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < e.rows.size(); ++i)
            v[e.pivots[i]] = f.neg(e.rows[i][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve(const PrimeField& f, const Matrix& a, const Vec& b)
{
    assert(b.size() == a.rows());
    const std::size_t n = a.cols();
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Vec r = a.row(i);
        r.push_back(b[i]);
        rows.push_back(std::move(r));
    }
    Echelon e = rows.empty() ? Echelon{} : row_reduce(f, std::move(rows));
    Vec x(n, 0);
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        if (e.pivots[i] == n)
            return std::nullopt; // pivot in the augmented column
        x[e.pivots[i]] = e.rows[i][n];
    }
    return x;
}

} // namespace orbitcoh
