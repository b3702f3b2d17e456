#pragma once

// Brute-force references used to cross-check the engine.

#include "orbitcoh/linalg.hpp"
#include "orbitcoh/presentation.hpp"

#include <cmath>
#include <set>
#include <vector>

namespace oracle {

using orbitcoh::Coeff;
using orbitcoh::Matrix;
using orbitcoh::Monomial;
using orbitcoh::Vec;

/// Rank of a by counting the image of every vector of F_p^cols.
inline std::size_t rank_by_enumeration(Coeff p, const Matrix& a)
{
    std::set<Vec> image;
    Vec x(a.cols(), 0);
    while (true) {
        Vec y(a.rows(), 0);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            std::uint64_t s = 0;
            for (std::size_t j = 0; j < a.cols(); ++j)
                s += static_cast<std::uint64_t>(a(i, j)) * x[j];
            y[i] = static_cast<Coeff>(s % p);
        }
        image.insert(std::move(y));
        std::size_t j = 0;
        while (j < x.size() && ++x[j] == p)
            x[j++] = 0;
        if (j == x.size())
            break;
    }
    std::size_t r = 0;
    for (std::size_t n = image.size(); n > 1; n /= p)
        ++r;
    return r;
}

/// Exponent vectors of the given degree; odd generators have exponent <= 1
/// when odd_squares_vanish.
inline void all_monomials(const std::vector<int>& degrees, const std::vector<bool>& capped, int degree,
                          std::size_t i, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (i == degrees.size()) {
        if (degree == 0)
            out.push_back(cur);
        return;
    }
    for (int e = 0; e * degrees[i] <= degree; ++e) {
        if (capped[i] && e > 1)
            break;
        cur[i] = e;
        all_monomials(degrees, capped, degree - e * degrees[i], i + 1, cur, out);
    }
    cur[i] = 0;
}

/// Dimension in `degree` of a quotient by monomial relations: the number of
/// monomials divisible by no lead.
inline int monomial_quotient_dim(const std::vector<int>& degrees, const std::vector<bool>& capped,
                                 const std::vector<std::vector<int>>& leads, int degree)
{
    std::vector<std::vector<int>> monos;
    std::vector<int> cur(degrees.size(), 0);
    all_monomials(degrees, capped, degree, 0, cur, monos);
    int count = 0;
    for (const auto& m : monos) {
        bool divisible = false;
        for (const auto& lead : leads) {
            bool d = true;
            for (std::size_t i = 0; i < m.size(); ++i)
                d = d && m[i] >= lead[i];
            divisible = divisible || d;
        }
        count += divisible ? 0 : 1;
    }
    return count;
}

/// H^j of the Case I orbit space, read off the list of vanishing degrees.
inline int case1_dim(int p, int n, int j)
{
    if (j > 2 * n * p - 2)
        return 0;
    for (int q = 1; q <= n; ++q)
        if (j == 2 * q * p - 1)
            return 0;
    return 1;
}

} // namespace oracle
