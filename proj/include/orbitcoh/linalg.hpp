#pragma once

#include "orbitcoh/field.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace orbitcoh {

using Vec = std::vector<Coeff>;

/// Dense matrix over Z_p, row-major. A linear map V -> W is stored with
/// rows indexed by the basis of W and columns by the basis of V.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static Matrix from_columns(std::size_t rows, const std::vector<Vec>& columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Coeff& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Coeff operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec row(std::size_t i) const;
    Vec column(std::size_t j) const;
    bool is_zero() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Coeff> data_;
};

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b);
Vec apply(const PrimeField& f, const Matrix& a, const Vec& v);

bool is_zero(const Vec& v);
void axpy(const PrimeField& f, Coeff c, const Vec& x, Vec& y); // y += c x

/// Which end of a row the pivot is taken from. Rightmost pivots make the
/// leading entry the highest-indexed coordinate.
enum class PivotOrder { Leftmost, Rightmost };

/// Fully reduced row echelon form: every pivot is 1 and is the only nonzero
/// entry in its column.
struct Echelon {
    std::vector<Vec> rows;
    std::vector<std::size_t> pivots;

    std::size_t rank() const noexcept { return rows.size(); }
};

Echelon row_reduce(const PrimeField& f, std::vector<Vec> rows, PivotOrder order = PivotOrder::Leftmost);

/// Subtracts echelon rows from v so v vanishes at every pivot. When `coeffs`
/// is given it receives the multiple of each row that was removed.
void reduce_against(const PrimeField& f, const Echelon& e, Vec& v, Vec* coeffs = nullptr);

std::size_t rank(const PrimeField& f, const Matrix& a);
/// Basis of { v : a v = 0 }.
std::vector<Vec> kernel(const PrimeField& f, const Matrix& a);
/// Some v with a v = b, if one exists.
std::optional<Vec> solve(const PrimeField& f, const Matrix& a, const Vec& b);

} // namespace orbitcoh
