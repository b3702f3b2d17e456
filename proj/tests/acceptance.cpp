// One line per acceptance criterion; exit status is the number of failures.

#include "oracles.hpp"
#include "properties.hpp"

#include "orbitcoh/gysin.hpp"
#include "orbitcoh/models.hpp"
#include "orbitcoh/scenarios.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace orbitcoh;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass)
            detail = why;
        pass = false;
    }
};

struct Setup {
    std::shared_ptr<const SerreE2> e2;
    BigradedPage page;
};

Setup fibration(const RingPresentation& fiber, int p, int target)
{
    const Window w = default_window(p, fiber.truncation() - 1, target);
    auto e2 = SerreE2::build(bg_truncated(p, w.k_max / 2), fiber, w);
    return {e2, BigradedPage::e2(e2)};
}

std::string show(const std::vector<int>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "[") << v[i];
    os << "]";
    return os.str();
}

std::vector<int> even_ones(int m, int target)
{
    std::vector<int> v(static_cast<std::size_t>(target) + 1, 0);
    for (int j = 0; j <= 2 * m - 2; j += 2)
        v[static_cast<std::size_t>(j)] = 1;
    return v;
}

Outcome case1_dims()
{
    Outcome o;
    for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
        const int target = 2 * n * p;
        auto s = fibration(lens_space(p, n * p), p, target);
        const auto res = run(s.page, case1_specs(*s.e2, p), target);
        std::vector<int> expected;
        for (int j = 0; j <= target; ++j)
            expected.push_back(oracle::case1_dim(p, n, j));
        if (res.total_dims != expected)
            o.fail("(p,n)=(" + std::to_string(p) + "," + std::to_string(n) + ") got " + show(res.total_dims));
    }
    if (o.pass)
        o.detail = "5 runs match the vanishing pattern";
    return o;
}

Outcome column_zero(bool mod2)
{
    Outcome o;
    int runs = 0;
    for (int p : mod2 ? std::vector<int>{2} : std::vector<int>{3, 5, 7})
        for (int m = 1; m <= 8; ++m) {
            const auto fiber = mod2 ? rp_odd_mod2(m) : lens_space(p, m);
            auto s = fibration(fiber, p, 2 * m);
            std::vector<std::pair<std::string, std::string>> d2{{"t", "0"}, {"a", "t"}};
            if (!mod2)
                d2.emplace_back("b", "0");
            const auto res = run(s.page, {make_spec(*s.e2, 2, d2)}, 2 * m);
            ++runs;
            if (res.total_dims != even_ones(m, 2 * m))
                o.fail("p=" + std::to_string(p) + " m=" + std::to_string(m) + " got " + show(res.total_dims));
        }
    if (o.pass)
        o.detail = std::to_string(runs) + " runs equal Z_p[z]/(z^m)";
    return o;
}

Outcome divisibility()
{
    Outcome o;
    int rejected = 0;
    for (int p : {3, 5, 7})
        for (int m = 2; m <= 10; ++m) {
            const auto rep = forced_divisibility(p, m);
            const bool rej = rep.verdict == "REJECTED";
            rejected += rej;
            if (rej != (m % p != 0))
                o.fail("p=" + std::to_string(p) + " m=" + std::to_string(m) + " verdict " + rep.verdict);
        }
    if (o.pass)
        o.detail = std::to_string(rejected) + " of 27 rejected, exactly those with p not dividing m";
    return o;
}

Outcome transgression()
{
    Outcome o;
    for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
        const int m = n * p, target = 2 * n * p;
        auto s = fibration(lens_space(p, m), p, target);
        const auto res = run(s.page, case1_specs(*s.e2, p, false), target);
        bool found = false;
        for (int j = 2 * m - 1; j <= target; ++j)
            found = found || res.total_dims[static_cast<std::size_t>(j)] > 0;
        if (!found)
            o.fail("(p,n)=(" + std::to_string(p) + "," + std::to_string(n) + ") vanishes above 2m-2");
    }
    if (o.pass)
        o.detail = "every run without d_2p has classes in degree >= 2m-1";
    return o;
}

/// Gysin dims with every rank counted by enumerating F_p^n.
std::vector<int> gysin_by_enumeration(const RingPresentation& base, const Element& alpha, int top)
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

Outcome gysin_round_trip()
{
    Outcome o;
    int cases = 0;
    auto expect = [&](const RingPresentation& base, const std::string& alpha, int top, const std::vector<int>& want,
                      const std::string& label) {
        const CharacteristicClass c = CharacteristicClass::parse(base, alpha);
        const auto oracle_dims = gysin_by_enumeration(base, c.value(), top);
        if (oracle_dims != want)
            o.fail(label + ": enumeration oracle gives " + show(oracle_dims));
        const auto dims = pushforward_dims(base, c, top);
        if (dims != want)
            o.fail(label + ": engine gives " + show(dims));
        ++cases;
    };
    for (int p : {3, 5, 7})
        for (int n = 1; n <= 2; ++n) {
            const int m = n * p;
            expect(theorem1_ring(p, n, {}, {}, 2 * m + 2), "x", 2 * m - 1, std::vector<int>(2 * m, 1),
                   "orbit ring p=" + std::to_string(p) + " n=" + std::to_string(n));
        }
    for (int p : {2, 3, 5, 7})
        for (int m = 1; m <= 8; ++m) {
            const auto cp = complex_projective(p, m, 2 * m + 2);
            expect(cp, "0", 2 * m - 1, std::vector<int>(2 * m, 1), "CP alpha=0 m=" + std::to_string(m));
            std::vector<int> sphere(2 * m, 0);
            sphere.front() = 1;
            sphere.back() += 1;
            expect(cp, "z", 2 * m - 1, sphere, "CP alpha=z m=" + std::to_string(m));
        }
    if (o.pass)
        o.detail = std::to_string(cases) + " predictions agree with the enumeration oracle";
    return o;
}

Outcome index_values()
{
    Outcome o;
    for (int p : {3, 5, 7}) {
        const auto ring = theorem1_ring(p, 1);
        const auto k = mod_p_index(ring, CharacteristicClass::parse(ring, "x"));
        if (k != p - 1)
            o.fail("p=" + std::to_string(p) + " index " + (k ? std::to_string(*k) : "UNDEFINED"));
        if (mod_p_index(ring, CharacteristicClass(ring, Element{})))
            o.fail("alpha=0 has an index");
    }
    for (int m = 2; m <= 8; ++m) {
        const auto cp = complex_projective(3, m, 2 * m);
        const auto k = mod_p_index(cp, CharacteristicClass::parse(cp, "z"));
        if (k != m - 1)
            o.fail("CP m=" + std::to_string(m) + " index " + (k ? std::to_string(*k) : "UNDEFINED"));
        if (mod_p_index(cp, CharacteristicClass(cp, Element{})))
            o.fail("alpha=0 has an index");
    }
    if (o.pass)
        o.detail = "p-1, m-1 and UNDEFINED as predicted";
    return o;
}

Outcome properties()
{
    props::Stats st;
    for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
        auto s = fibration(lens_space(p, n * p), p, 2 * n * p);
        props::run_laws(s.page, case1_specs(*s.e2, p), 2 * n * p, st);
        props::run_laws(s.page, case1_specs(*s.e2, p, false), 2 * n * p, st);
    }
    for (int p : {3, 5, 7})
        for (int m = 1; m <= 8; ++m) {
            auto s = fibration(lens_space(p, m), p, 2 * m);
            props::run_laws(s.page, {make_spec(*s.e2, 2, {{"t", "0"}, {"a", "t"}, {"b", "0"}})}, 2 * m, st);
        }
    for (int m = 1; m <= 8; ++m) {
        auto s = fibration(rp_odd_mod2(m), 2, 2 * m);
        props::run_laws(s.page, {make_spec(*s.e2, 2, {{"t", "0"}, {"a", "t"}})}, 2 * m, st);
    }
    for (int p : {2, 3, 5, 7}) {
        props::algebra_laws(lens_space(p, 6), 12, st);
        props::algebra_laws(complex_projective(p, 6), 12, st);
    }
    props::algebra_laws(rp_odd_mod2(6), 12, st);
    for (int p : {3, 5, 7})
        props::algebra_laws(theorem1_ring(p, 2, {}, {}, 12), 12, st);
    props::algebra_laws(theorem1_ring(3, 2, {{{1, 3}, 2}}, {}, 12), 12, st);
    {
        auto s = fibration(lens_space(3, 3), 3, 6);
        props::algebra_laws(s.e2->algebra(), 12, st);
    }
    Outcome o;
    if (!st.ok()) {
        o.pass = false;
        o.detail = st.failures.front() + " (" + std::to_string(st.failures.size()) + "+ failures)";
    } else {
        o.detail = std::to_string(st.checks) + " checks";
    }
    return o;
}

/// Z_p[z, w]/(z^m, z w, w^2) with |w| = 2m
RingPresentation padded_cp(int p, int m)
{
    auto mono = [](int a, int b) { return Monomial{{a, b}}; };
    return RingPresentation::build(PrimeField(p), {{"z", 2}, {"w", 2 * m}},
                                   {{mono(m, 0), {}}, {mono(1, 1), {}}, {mono(0, 2), {}}}, 2 * m + 4);
}

Outcome vanishing()
{
    Outcome o;
    for (int p : {3, 5, 7})
        for (int n = 1; n <= 2; ++n) {
            const int m = n * p;
            const auto ring = theorem1_ring(p, n, {}, {}, 2 * m + 4);
            if (!verify_vanishing(2 * m - 1, ring, CharacteristicClass::parse(ring, "x")).pass)
                o.fail("orbit ring p=" + std::to_string(p) + " n=" + std::to_string(n));
        }
    for (int p : {2, 3, 5, 7})
        for (int m = 1; m <= 8; ++m) {
            const auto cp = complex_projective(p, m, 2 * m + 4);
            if (!verify_vanishing(2 * m - 1, cp, CharacteristicClass::parse(cp, "z")).pass)
                o.fail("CP p=" + std::to_string(p) + " m=" + std::to_string(m));
            const auto bad = padded_cp(p, m);
            const auto rep = verify_vanishing(2 * m - 1, bad, CharacteristicClass::parse(bad, "z"));
            if (rep.pass || rep.first_violation != 2 * m)
                o.fail("negative control m=" + std::to_string(m) + " not caught at degree " + std::to_string(2 * m));
        }
    if (o.pass)
        o.detail = "all rings vanish from 2m-1; controls fail at 2m";
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        std::string name;
        double limit;  // seconds, 0 = none
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria{
        {1, "Case I total dimensions", 30, case1_dims},
        {2, "Case II total dimensions", 10, [] { return column_zero(false); }},
        {3, "mod 2 total dimensions", 10, [] { return column_zero(true); }},
        {4, "forced divisibility", 0, divisibility},
        {5, "transgression necessity", 0, transgression},
        {6, "Gysin round trip", 0, gysin_round_trip},
        {7, "mod p index", 0, index_values},
        {8, "property suites", 60, properties},
        {9, "vanishing above the dimension", 0, vanishing},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit > 0 && secs >= c.limit)
            o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit) + " s");
        failures += !o.pass;
        std::printf("criterion %d %-32s %s  %.3fs  %s\n", c.id, c.name.c_str(), o.pass ? "PASS" : "FAIL", secs,
                    o.detail.c_str());
    }
    return failures;
}
