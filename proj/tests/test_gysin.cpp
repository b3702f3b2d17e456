#include "oracles.hpp"

#include "orbitcoh/error.hpp"
#include "orbitcoh/gysin.hpp"
#include "orbitcoh/models.hpp"

#include <doctest.h>


using namespace orbitcoh;

namespace {

/// dims from the definition, with ranks counted by enumeration
std::vector<int> reference_dims(const RingPresentation& base, const Element& alpha, int top)
{
    auto dim = [&](int d) { return d < 0 ? 0 : static_cast<int>(base.basis(d).size()); };
    auto rk = [&](int src) {
        if (src < 0 || alpha.is_zero())
            return 0;
        return static_cast<int>(oracle::rank_by_enumeration(base.field().p(), cup_map(base, alpha, src, 2)));
    };
    std::vector<int> out;
    for (int i = 0; i <= top; ++i)
        out.push_back(dim(i) - rk(i - 2) + dim(i - 1) - rk(i - 1));
    return out;
}

/// Z_p[z, w]/(z^m, z w, w^2), |w| = 2m: CP with a stray class on top
RingPresentation padded_cp(int p, int m)
{
    PrimeField f(p);
    auto mono = [](int a, int b) { return Monomial{{a, b}}; };
    return RingPresentation::build(f, {{"z", 2}, {"w", 2 * m}},
                                   {{mono(m, 0), {}}, {mono(1, 1), {}}, {mono(0, 2), {}}}, 2 * m + 4);
}

} // namespace

TEST_CASE("circle bundles over CP: sphere and lens space")
{
    for (int p : {2, 3, 5})
        for (int m = 1; m <= 6; ++m) {
            const auto cp = complex_projective(p, m, 2 * m + 2);
            const CharacteristicClass z = CharacteristicClass::parse(cp, "z");  // zero when m = 1
            const CharacteristicClass zero(cp, Element{});
            std::vector<int> sphere(static_cast<std::size_t>(2 * m), 0);
            sphere.front() = 1;
            sphere.back() += 1;
            CHECK(pushforward_dims(cp, z, 2 * m - 1) == sphere);
            CHECK(pushforward_dims(cp, zero, 2 * m - 1) == std::vector<int>(static_cast<std::size_t>(2 * m), 1));
            CHECK(pushforward_dims(cp, z, 2 * m - 1) == reference_dims(cp, z.value(), 2 * m - 1));
        }
}

TEST_CASE("orbit space ring with alpha = x gives the lens space")
{
    for (int p : {3, 5, 7})
        for (int n = 1; n <= 2; ++n) {
            const int m = n * p;
            const auto ring = theorem1_ring(p, n, {}, {}, 2 * m + 2);
            const CharacteristicClass x = CharacteristicClass::parse(ring, "x");
            const auto dims = pushforward_dims(ring, x, 2 * m - 1);
            CHECK(dims == std::vector<int>(static_cast<std::size_t>(2 * m), 1));
            CHECK(dims == reference_dims(ring, x.value(), 2 * m - 1));
        }
}

TEST_CASE("Gysin bookkeeping identities")
{
    std::vector<RingPresentation> bases{lens_space(3, 3, 8), complex_projective(5, 4, 10),
                                        theorem1_ring(3, 2, {{{1, 3}, 1}}, {}, 14), bg_truncated(7, 5),
                                        theorem1_ring(5, 1, {}, {}, 12)};
    for (const auto& base : bases) {
        const int top = base.truncation() - 2;
        std::vector<Element> alphas{Element{}};
        for (const auto& m : base.basis(2)) {
            alphas.push_back(base.normal_form(m));
            alphas.push_back(base.normal_form(m, base.field().p() - 1));
        }
        for (const auto& a : alphas) {
            const CharacteristicClass alpha(base, a);
            const auto dims = pushforward_dims(base, alpha, top);
            CHECK(dims == reference_dims(base, a, top));
            for (int d : dims)
                CHECK(d >= 0);
            if (a.is_zero())
                for (int i = 0; i <= top; ++i)
                    CHECK(dims[static_cast<std::size_t>(i)] ==
                          static_cast<int>(base.basis(i).size()) + (i ? static_cast<int>(base.basis(i - 1).size()) : 0));
            // with every class of the base counted, the Euler characteristic vanishes
            if (static_cast<int>(base.basis(top).size() + base.basis(top - 1).size()) == 0) {
                int chi = 0;
                for (int i = 0; i <= top; ++i)
                    chi += (i % 2 ? -1 : 1) * dims[static_cast<std::size_t>(i)];
                CHECK(chi == 0);
            }
        }
    }
}

TEST_CASE("mod p index")
{
    for (int p : {3, 5, 7}) {
        const auto ring = theorem1_ring(p, 1);
        CHECK(mod_p_index(ring, CharacteristicClass::parse(ring, "x")) == p - 1);
        for (Coeff c = 1; c < static_cast<Coeff>(p); ++c)
            CHECK(mod_p_index(ring, CharacteristicClass(ring, ring.scale(c, ring.parse("x")))) == p - 1);
    }
    for (int m = 2; m <= 8; ++m) {
        const auto cp = complex_projective(3, m, 2 * m);
        CHECK(mod_p_index(cp, CharacteristicClass::parse(cp, "z")) == m - 1);
        CHECK_FALSE(mod_p_index(cp, CharacteristicClass(cp, Element{})));
    }
    const auto short_cp = complex_projective(3, 4);  // truncated below z^4
    try {
        mod_p_index(short_cp, CharacteristicClass::parse(short_cp, "z"));
        FAIL("no overflow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegreeOverflow);
    }
}

TEST_CASE("characteristic classes must have degree 2")
{
    const auto lens = lens_space(3, 3);
    try {
        CharacteristicClass::parse(lens, "a");
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::WrongDegreeAlpha);
    }
    CHECK_THROWS_AS(CharacteristicClass::parse(lens, "a*b"), Error);
    CHECK_NOTHROW(CharacteristicClass::parse(lens, "2*b"));
    CHECK_THROWS_AS(pushforward_dims(lens, CharacteristicClass::parse(lens, "b"), lens.truncation() - 1), Error);
}

TEST_CASE("vanishing above the dimension")
{
    for (int m = 2; m <= 6; ++m) {
        const auto cp = complex_projective(5, m, 2 * m + 4);
        const auto rep = verify_vanishing(2 * m - 1, cp, CharacteristicClass::parse(cp, "z"));
        CHECK(rep.pass);
        CHECK(rep.nilpotency == m);

        const auto padded = padded_cp(5, m);
        const auto bad = verify_vanishing(2 * m - 1, padded, CharacteristicClass::parse(padded, "z"));
        CHECK_FALSE(bad.pass);
        CHECK(bad.first_violation == 2 * m);
    }
    for (int p : {3, 5, 7})
        for (int n = 1; n <= 2; ++n) {
            const auto ring = theorem1_ring(p, n, {}, {}, 2 * n * p + 4);
            CHECK(verify_vanishing(2 * n * p - 1, ring, CharacteristicClass::parse(ring, "x")).pass);
        }
}

TEST_CASE("report JSON")
{
    const auto cp = complex_projective(3, 2, 6);
    const json j = gysin_report(cp, CharacteristicClass(cp, Element{}), 3, 3);
    CHECK(j["alpha"] == "0");
    CHECK(j["index"] == "UNDEFINED");
    CHECK(j["predictions"] == json::array({1, 1, 1, 1}));
    CHECK(j["vanishing"]["pass"] == true);
    CHECK(j["vanishing"]["first_violation"].is_null());
}
