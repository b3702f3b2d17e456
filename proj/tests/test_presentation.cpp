#include "oracles.hpp"
#include "properties.hpp"

#include "orbitcoh/error.hpp"
#include "orbitcoh/models.hpp"
#include "orbitcoh/presentation.hpp"

#include <doctest.h>

using namespace orbitcoh;

namespace {

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidParams;
}

Monomial mono(std::vector<int> e)
{
    return Monomial{std::move(e)};
}

} // namespace

TEST_CASE("lens space basis matches monomial counting")
{
    for (int p : {3, 5}) {
        for (int m = 1; m <= 6; ++m) {
            const auto lens = lens_space(p, m);
            for (int d = 0; d <= lens.truncation(); ++d)
                CHECK(static_cast<int>(lens.basis(d).size()) ==
                      oracle::monomial_quotient_dim({1, 2}, {true, false}, {{0, m}}, d));
            const auto dims = poincare_polynomial(lens);
            CHECK(dims.size() == static_cast<std::size_t>(2 * m + 1));
            for (int d = 0; d < 2 * m; ++d)
                CHECK(dims[static_cast<std::size_t>(d)] == 1);
        }
    }
}

TEST_CASE("model rings have the expected Poincare series")
{
    CHECK(poincare_polynomial(rp_odd_mod2(3)) == std::vector<int>{1, 1, 1, 1, 1, 1, 0});
    CHECK(poincare_polynomial(complex_projective(5, 3)) == std::vector<int>{1, 0, 1, 0, 1, 0});
    CHECK(poincare_polynomial(bg_truncated(3, 2)) == std::vector<int>{1, 0, 1, 0, 1});
    CHECK(poincare_polynomial(complex_projective(3, 1)) == std::vector<int>{1, 0});
    auto lens = model_space(ModelKind::Lens, {3, 3, 0, std::nullopt});
    CHECK(lens.basis(5).size() == 1);
    CHECK(lens.format(lens.basis(5)[0]) == "a*b^2");
    CHECK(parse_model_kind("cp") == ModelKind::Cp);
    CHECK_FALSE(parse_model_kind("torus"));
}

TEST_CASE("orbit space ring matches monomial counting")
{
    for (int p : {3, 5, 7})
        for (int n = 1; n <= 2; ++n) {
            const auto ring = theorem1_ring(p, n);
            std::vector<int> degrees;
            std::vector<bool> capped;
            std::vector<std::vector<int>> leads;
            const int gens = p + 1;  // p - 1 odd generators, x, z
            for (int q = 1; q <= 2 * p - 3; q += 2) {
                degrees.push_back(q);
                capped.push_back(true);
            }
            degrees.push_back(2);
            capped.push_back(false);
            degrees.push_back(2 * p);
            capped.push_back(false);
            auto lead = [&](std::vector<std::pair<int, int>> parts) {
                std::vector<int> e(static_cast<std::size_t>(gens), 0);
                for (auto [i, k] : parts)
                    e[static_cast<std::size_t>(i)] = k;
                leads.push_back(e);
            };
            const int x = p - 1, z = p;
            lead({{x, p}});
            lead({{z, n}});
            for (int i = 0; i < p - 1; ++i) {
                lead({{x, 1}, {i, 1}});
                for (int j = i + 1; j < p - 1; ++j)
                    lead({{i, 1}, {j, 1}});
            }
            for (int d = 0; d <= ring.truncation(); ++d)
                CHECK(static_cast<int>(ring.basis(d).size()) ==
                      oracle::monomial_quotient_dim(degrees, capped, leads, d));
            for (int j = 0; j <= 2 * n * p; ++j)
                CHECK(static_cast<int>(ring.basis(j).size()) == oracle::case1_dim(p, n, j));
        }
}

TEST_CASE("orbit space constants: only confluent choices are accepted")
{
    // y1 y3 = A x^2 is allowed for p = 3 (q + q' = 2p - 2)
    const auto ring = theorem1_ring(3, 2, {{{1, 3}, 2}});
    const Element prod = ring.multiply(ring.parse("y1"), ring.parse("y3"));
    CHECK(prod == ring.parse("2*x^2"));
    // x (y1 y3) = x^3 but (x y1) y3 = 0, fine only when x^3 = 0
    CHECK(kind_of([] { theorem1_ring(5, 1, {{{1, 3}, 1}}); }) == ErrorKind::NonConfluentRelations);
    CHECK_NOTHROW(theorem1_ring(5, 1, {{{1, 7}, 1}, {{3, 5}, 4}}));
    // x (y5 y7) = z x^2 != 0 but (x y5) y7 = 0
    CHECK(kind_of([] { theorem1_ring(5, 2, {}, {{{5, 7}, 1}}); }) == ErrorKind::NonConfluentRelations);
    CHECK(kind_of([] { theorem1_ring(3, 2, {}, {{{3, 5}, 1}}); }) == ErrorKind::InvalidParams);
    CHECK(kind_of([] { theorem1_ring(3, 2, {{{1, 1}, 1}}); }) == ErrorKind::InvalidParams);
}

TEST_CASE("presentation validation")
{
    PrimeField f(3);
    CHECK(kind_of([&] { RingPresentation::build(f, {{"a", 1}, {"a", 2}}, {}, 4); }) ==
          ErrorKind::DuplicateGenerator);
    CHECK(kind_of([&] {
              RingPresentation::build(f, {{"a", 2}, {"b", 4}}, {{mono({2, 0}), {{1, mono({0, 0})}}}}, 4);
          }) == ErrorKind::NonHomogeneousRelation);
    CHECK(kind_of([&] {
              RingPresentation::build(f, {{"a", 2}, {"b", 4}}, {{mono({0, 1}), {{1, mono({2, 0})}}}}, 8);
          }) != ErrorKind::NonConfluentRelations);
    // b -> a^2 rewrites towards a bigger monomial in the order (first generator most significant)
    CHECK(kind_of([&] {
              RingPresentation::build(f, {{"a", 2}, {"b", 4}}, {{mono({0, 1}), {{1, mono({2, 0})}}}}, 8);
          }) == ErrorKind::NonterminatingRewrite);
    CHECK(kind_of([&] { RingPresentation::build(f, {{"a", 0}}, {}, 4); }) == ErrorKind::InvalidParams);
    CHECK(kind_of([] { lens_space(4, 3); }) == ErrorKind::InvalidParams);
    const auto lens = lens_space(3, 3);
    CHECK(kind_of([&] { lens.basis(7); }) == ErrorKind::DegreeOutOfWindow);
    CHECK(kind_of([&] { lens.multiply(lens.parse("a*b^2"), lens.parse("a*b^2")); }) == ErrorKind::DegreeOverflow);
    CHECK(kind_of([&] { lens.degree(lens.parse("a + b")); }) == ErrorKind::NonHomogeneousRelation);
    CHECK(kind_of([&] { lens.parse("c"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { lens.parse("2*"); }) == ErrorKind::ParseError);
}

TEST_CASE("parse and format round trip")
{
    const auto lens = lens_space(5, 4);
    for (int d = 0; d <= lens.truncation(); ++d)
        for (const auto& m : lens.basis(d)) {
            const Element e = lens.normal_form(m, 3);
            CHECK(lens.parse(lens.format(e)) == e);
        }
    CHECK(lens.parse("0").is_zero());
    CHECK(lens.format(Element{}) == "0");
    CHECK(lens.parse("b*a*b") == lens.parse("a*b^2"));
    CHECK(lens.parse("a*a").is_zero());
    CHECK(lens.parse("b^4").is_zero());
    CHECK(lens.parse("6*b") == lens.parse("b"));
}

TEST_CASE("graded commutativity and associativity up to degree 12")
{
    props::Stats s;
    props::algebra_laws(lens_space(3, 6), 12, s);
    props::algebra_laws(lens_space(2, 6), 12, s);
    props::algebra_laws(rp_odd_mod2(6), 12, s);
    props::algebra_laws(theorem1_ring(3, 2), 12, s);
    props::algebra_laws(theorem1_ring(3, 2, {{{1, 3}, 1}}), 12, s);
    props::algebra_laws(theorem1_ring(5, 1), 10, s);
    for (const auto& msg : s.failures)
        INFO(msg);
    CHECK(s.ok());
    CHECK(s.checks > 1000);
}

TEST_CASE("cup map columns are products")
{
    const auto ring = theorem1_ring(3, 2);
    const Element x = ring.parse("x");
    for (int d = 0; d + 2 <= ring.truncation(); ++d) {
        const Matrix m = cup_map(ring, x, d);
        CHECK(m.rows() == ring.basis(d + 2).size());
        CHECK(m.cols() == ring.basis(d).size());
        for (std::size_t j = 0; j < m.cols(); ++j)
            CHECK(ring.from_vector(d + 2, m.column(j)) == ring.multiply(x, ring.normal_form(ring.basis(d)[j])));
    }
    CHECK(kind_of([&] { cup_map(ring, ring.parse("y1"), 0, 2); }) == ErrorKind::WrongDegreeAlpha);
    CHECK(kind_of([&] { cup_map(ring, x, ring.truncation() - 1); }) == ErrorKind::DegreeOverflow);
    CHECK(cup_map(ring, Element{}, 2, 2).is_zero());
}
