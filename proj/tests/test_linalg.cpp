#include "oracles.hpp"

#include "orbitcoh/error.hpp"
#include "orbitcoh/linalg.hpp"

#include <doctest.h>

#include <random>

using namespace orbitcoh;

namespace {

Matrix random_matrix(std::mt19937& rng, Coeff p, std::size_t rows, std::size_t cols, int zero_bias)
{
    Matrix a(rows, cols);
    std::uniform_int_distribution<int> coin(0, zero_bias);
    std::uniform_int_distribution<Coeff> entry(1, p - 1);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            a(i, j) = coin(rng) == 0 ? entry(rng) : 0;
    return a;
}

} // namespace

TEST_CASE("field arithmetic agrees with integer arithmetic")
{
    for (std::int64_t p : {2, 3, 5, 7, 11}) {
        PrimeField f(p);
        for (Coeff a = 0; a < f.p(); ++a) {
            CHECK(f.add(a, f.neg(a)) == 0);
            if (a != 0)
                CHECK(f.mul(a, f.inv(a)) == 1);
            for (Coeff b = 0; b < f.p(); ++b) {
                CHECK(f.mul(a, b) == (a * b) % f.p());
                CHECK(f.sub(a, b) == f.reduce(std::int64_t{a} - b));
            }
        }
        CHECK(f.sign(3) == f.p() - 1);
        CHECK(f.sign(4) == 1 % f.p());
        CHECK(f.pow(2 % f.p(), f.p() - 1) == (f.p() == 2 ? 0u : 1u));
    }
}

TEST_CASE("field rejects composite moduli")
{
    for (std::int64_t n : {0, 1, 4, 9, 15, 91})
        CHECK_THROWS_AS(PrimeField{n}, Error);
    try {
        PrimeField f(6);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPrime);
    }
}

TEST_CASE("rank matches enumeration of F_p^n")
{
    std::mt19937 rng(20240611);
    for (Coeff p : {2u, 3u, 5u}) {
        PrimeField f(p);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % (p == 5 ? 4 : 6);
            const Matrix a = random_matrix(rng, p, rows, cols, trial % 3);
            CHECK(rank(f, a) == oracle::rank_by_enumeration(p, a));
        }
    }
}

TEST_CASE("kernel, solve and echelon forms are consistent")
{
    std::mt19937 rng(7);
    for (Coeff p : {2u, 3u, 7u}) {
        PrimeField f(p);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
            const Matrix a = random_matrix(rng, p, rows, cols, trial % 2);
            const auto ker = kernel(f, a);
            CHECK(ker.size() + rank(f, a) == cols);
            for (const auto& v : ker)
                CHECK(is_zero(apply(f, a, v)));
            if (!ker.empty())
                CHECK(oracle::rank_by_enumeration(p, Matrix::from_columns(cols, ker)) == ker.size());

            Vec x(cols);
            for (auto& c : x)
                c = static_cast<Coeff>(rng() % p);
            const Vec b = apply(f, a, x);
            auto sol = solve(f, a, b);
            REQUIRE(sol);
            CHECK(apply(f, a, *sol) == b);

            std::vector<Vec> rows_v;
            for (std::size_t i = 0; i < rows; ++i)
                rows_v.push_back(a.row(i));
            for (auto order : {PivotOrder::Leftmost, PivotOrder::Rightmost}) {
                const Echelon e = row_reduce(f, rows_v, order);
                CHECK(e.rank() == rank(f, a));
                for (std::size_t i = 0; i < e.rank(); ++i) {
                    CHECK(e.rows[i][e.pivots[i]] == 1);
                    for (std::size_t k = 0; k < e.rank(); ++k)
                        if (k != i)
                            CHECK(e.rows[k][e.pivots[i]] == 0);
                }
                for (auto v : rows_v) {
                    reduce_against(f, e, v);
                    CHECK(is_zero(v));
                }
            }
        }
    }
}

TEST_CASE("solve reports inconsistent systems")
{
    PrimeField f(3);
    Matrix a(2, 1);
    a(0, 0) = 1;
    a(1, 0) = 1;
    CHECK_FALSE(solve(f, a, Vec{1, 2}));
    CHECK(solve(f, a, Vec{2, 2}) == Vec{2});
}

TEST_CASE("reduce_against records coefficients")
{
    PrimeField f(5);
    const Echelon e = row_reduce(f, {{1, 0, 2}, {0, 1, 3}});
    Vec v{2, 4, 1};
    Vec coeffs;
    reduce_against(f, e, v, &coeffs);
    CHECK(is_zero(v));
    CHECK(coeffs == Vec{2, 4});
}
