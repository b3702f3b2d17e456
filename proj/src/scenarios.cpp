#include "orbitcoh/scenarios.hpp"

#include "orbitcoh/error.hpp"
#include "orbitcoh/gysin.hpp"
#include "orbitcoh/models.hpp"

#include <future>
#include <sstream>

namespace orbitcoh {

namespace {

void require_odd_prime(int p)
{
    PrimeField f(static_cast<Coeff>(p > 0 ? p : 0));
    if (p == 2)
        throw Error(ErrorKind::InvalidParams, "p must be an odd prime");
}

void require_positive(const char* name, int v, int least = 1)
{
    if (v < least)
        throw Error(ErrorKind::InvalidParams, std::string(name) + " must be at least " + std::to_string(least));
}

std::string pow_text(const std::string& base, int e)
{
    if (e == 0)
        return "1";
    return e == 1 ? base : base + "^" + std::to_string(e);
}

std::string list(const std::vector<int>& v)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

struct Fibration {
    std::shared_ptr<const SerreE2> e2;
    BigradedPage page;
};

Fibration fibration(const RingPresentation& fiber, int p, int target, std::optional<Window> window = std::nullopt)
{
    const Window w = window.value_or(default_window(p, fiber.truncation() - 1, target));
    auto e2 = SerreE2::build(bg_truncated(p, w.k_max / 2), fiber, w);
    auto page = BigradedPage::e2(e2);
    return {e2, std::move(page)};
}

/// Whether the product of E_2 representatives is zero in E_inf; nullopt if it
/// is not a permanent cycle.
std::optional<bool> product_vanishes(const BigradedPage& page, const std::vector<Element>& factors)
{
    const SerreE2& e2 = page.algebra();
    Element prod = e2.algebra().one();
    Bidegree b{};
    for (const auto& f : factors) {
        auto fb = e2.bidegree(f);
        if (!fb)
            return true;
        b = b + *fb;
        if (!page.window().contains(b))
            return true;
        prod = e2.algebra().multiply(prod, f);
    }
    auto cls = page.classify(b, prod);
    if (!cls)
        return std::nullopt;
    return is_zero(*cls);
}

Check vanishing_check(const BigradedPage& page, const std::string& name, const std::vector<Element>& factors)
{
    auto v = product_vanishes(page, factors);
    Check c{name, v.value_or(false), ""};
    if (!v)
        c.detail = "product is not a permanent cycle";
    else if (!*v)
        c.detail = "product is nonzero in E_inf";
    return c;
}

Check dims_check(const std::string& name, const std::vector<int>& engine, const std::vector<int>& expected)
{
    Check c{name, engine == expected, "engine " + list(engine) + " vs expected " + list(expected)};
    return c;
}

Check collapse_check(const RunResult& res, int expected_page)
{
    Check c{"collapse at E_" + std::to_string(expected_page), res.collapse_page == expected_page,
            "last nonzero differential before E_" + std::to_string(res.collapse_page)};
    return c;
}

Check forced_pages_check(const RunResult& res)
{
    Check c{"every unspecified page vanishes for a forced reason", res.assumed_zero_pages.empty(), ""};
    if (!c.pass)
        c.detail = "assumed zero on pages " + list(res.assumed_zero_pages);
    return c;
}

void window_check(ScenarioReport& rep, std::optional<Window> window, int p, int target)
{
    if (!window)
        return;
    rep.checks.push_back({"window guards total degree " + std::to_string(target), window->guards(p, target),
                          "window " + std::to_string(window->k_max) + "," + std::to_string(window->l_max)});
}

void finish(ScenarioReport& rep, const std::string& expected_verdict)
{
    if (rep.verdict.empty()) {
        bool all = true;
        for (const auto& c : rep.checks)
            all = all && c.pass;
        rep.verdict = all ? "PASS" : "FAIL";
    }
    rep.expected = rep.verdict == expected_verdict;
}

ScenarioReport column_zero_run(const std::string& id, int p, int m, const RingPresentation& fiber,
                               const std::string& image_of_z, std::optional<Window> window)
{
    ScenarioReport rep;
    rep.scenario = id;
    const int target = 2 * m;
    window_check(rep, window, p, target);
    auto [e2, page] = fibration(fiber, p, target, window);
    std::vector<std::pair<std::string, std::string>> d2{{"t", "0"}, {"a", "t"}};
    if (p != 2)
        d2.emplace_back("b", "0");
    const std::vector<DifferentialSpec> specs{make_spec(*e2, 2, d2)};
    const RunResult res = run(page, specs, target);
    rep.total_dims = res.total_dims;
    rep.transcript = transcript_json(res);

    std::vector<int> expected(static_cast<std::size_t>(target) + 1, 0);
    for (int j = 0; j <= 2 * m - 2; j += 2)
        expected[static_cast<std::size_t>(j)] = 1;
    rep.checks.push_back(dims_check("total dimensions are those of Z_p[z]/(z^m)", res.total_dims, expected));

    Check column{"E_inf is concentrated in column k = 0", true, ""};
    for (const auto& b : res.e_inf.support())
        if (b.total() <= target && b.k != 0) {
            column.pass = false;
            column.detail = "nonzero cell at (" + std::to_string(b.k) + "," + std::to_string(b.l) + ")";
            break;
        }
    rep.checks.push_back(column);
    rep.checks.push_back(collapse_check(res, 3));
    rep.checks.push_back(forced_pages_check(res));

    const auto candidate = complex_projective(p, m, target);
    rep.expected_presentation = to_latex(candidate);
    auto matched = match_presentation(res.e_inf, candidate, {{"z", e2->parse(image_of_z)}}, target);
    rep.checks.insert(rep.checks.end(), matched.begin(), matched.end());
    finish(rep, "PASS");
    return rep;
}

} // namespace

// ---------------------------------------------------------------------------

json ScenarioReport::to_json() const
{
    json checks_json = json::array();
    for (const auto& c : checks)
        checks_json.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    json j{{"scenario", scenario},
           {"inputs", inputs},
           {"verdict", verdict},
           {"expected", expected},
           {"checks", checks_json},
           {"expected_presentation", expected_presentation},
           {"total_dims", total_dims},
           {"index", index},
           {"transcript", transcript}};
    if (!reason.empty())
        j["reason"] = reason;
    return j;
}

json page_dims_json(const BigradedPage& page, int max_total)
{
    json cells = json::array();
    for (const auto& b : page.support())
        if (b.total() <= max_total)
            cells.push_back({b.k, b.l, page.dim(b)});
    return cells;
}

json transcript_json(const RunResult& result)
{
    json pages = json::array();
    for (const auto& pr : result.pages) {
        json dims = json::array();
        for (const auto& [b, d] : pr.dims)
            dims.push_back({b.k, b.l, d});
        json diffs = json::array();
        for (const auto& d : pr.differentials)
            diffs.push_back({{"from", {d.from.k, d.from.l}}, {"to", {d.to.k, d.to.l}}, {"rank", d.rank}});
        pages.push_back({{"r", pr.r}, {"mode", std::string(to_string(pr.mode))}, {"dims", dims},
                         {"differentials", diffs}});
    }
    return {{"pages", pages},
            {"e_inf_dims", page_dims_json(result.e_inf, result.target)},
            {"total_dims", result.total_dims},
            {"collapse_page", result.collapse_page},
            {"assumed_zero_pages", result.assumed_zero_pages}};
}

std::vector<DifferentialSpec> case1_specs(const SerreE2& e2, int p, bool transgression)
{
    std::vector<DifferentialSpec> specs{make_spec(e2, 2, {{"t", "0"}, {"a", "0"}, {"b", "t*a"}})};
    std::vector<std::pair<std::string, std::string>> top{{"t", "0"}};
    for (int j = 0; j < p; ++j)
        top.emplace_back("a*" + pow_text("b", j), j == p - 1 && transgression ? pow_text("t", p) : "0");
    top.emplace_back(pow_text("b", p), "0");
    specs.push_back(make_spec(e2, 2 * p, top));
    return specs;
}

int case1_betti(int p, int n, int j)
{
    if (j < 0 || j > 2 * n * p - 2)
        return 0;
    return (j + 1) % (2 * p) == 0 ? 0 : 1;
}

ScenarioReport theorem1_case1(int p, int n, std::optional<Window> window)
{
    require_odd_prime(p);
    require_positive("n", n);
    ScenarioReport rep;
    rep.scenario = "theorem1-case1";
    rep.inputs = {{"p", p}, {"n", n}, {"m", n * p}, {"case", "I"}};
    const int m = n * p;
    const int target = 2 * n * p;
    window_check(rep, window, p, target);
    auto [e2, page] = fibration(lens_space(p, m), p, target, window);
    const RunResult res = run(page, case1_specs(*e2, p), target);
    rep.total_dims = res.total_dims;
    rep.transcript = transcript_json(res);

    std::vector<int> expected;
    for (int j = 0; j <= target; ++j)
        expected.push_back(case1_betti(p, n, j));
    rep.checks.push_back(dims_check("total dimensions: zero exactly at j = 2qp - 1 and j > 2np - 2", res.total_dims,
                                    expected));
    rep.checks.push_back(collapse_check(res, 2 * p + 1));
    rep.checks.push_back(forced_pages_check(res));

    std::vector<int> base_row, expected_row;
    for (int k = 0; k <= target; k += 2) {
        base_row.push_back(res.e_inf.dim({k, 0}));
        expected_row.push_back(k < 2 * p ? 1 : 0);
    }
    rep.checks.push_back(dims_check("bottom row is the image of Z_p[t]/(t^p)", base_row, expected_row));

    const auto candidate = theorem1_ring(p, n, {}, {}, target);
    rep.expected_presentation = to_latex(candidate);
    std::map<std::string, Element> images{{"x", e2->parse("t")}, {"z", e2->parse(pow_text("b", p))}};
    for (int q = 1; q <= 2 * p - 3; q += 2)
        images[y_name(q)] = e2->parse("a*" + pow_text("b", (q - 1) / 2));
    auto matched = match_presentation(res.e_inf, candidate, images, target);
    rep.checks.insert(rep.checks.end(), matched.begin(), matched.end());

    for (int q = 1; q <= 2 * p - 3; q += 2) {
        const Element& y = images[y_name(q)];
        rep.checks.push_back(vanishing_check(res.e_inf, y_name(q) + "^2 = 0", {y, y}));
        const int q2 = 2 * p - q;
        if (q2 <= 2 * p - 3 && q < q2)
            rep.checks.push_back(vanishing_check(res.e_inf, y_name(q) + "*" + y_name(q2) + " = 0",
                                                 {y, images[y_name(q2)]}));
    }

    const auto ring = theorem1_ring(p, n, {}, {}, 2 * m + 2);
    const CharacteristicClass x = CharacteristicClass::parse(ring, "x");
    const auto index = mod_p_index(ring, x);
    rep.index = index ? json(*index) : json("UNDEFINED");
    rep.checks.push_back({"mod p index of x is p - 1", index == p - 1,
                          "index " + (index ? std::to_string(*index) : std::string("UNDEFINED"))});
    rep.checks.push_back(dims_check("circle bundle over the ring with alpha = x has lens Betti numbers",
                                    pushforward_dims(ring, x, 2 * m - 1),
                                    std::vector<int>(static_cast<std::size_t>(2 * m), 1)));
    finish(rep, "PASS");
    return rep;
}

ScenarioReport theorem1_case2(int p, int m, std::optional<Window> window)
{
    require_odd_prime(p);
    require_positive("m", m);
    auto rep = column_zero_run("theorem1-case2", p, m, lens_space(p, m), "b", window);
    rep.inputs = {{"p", p}, {"m", m}, {"case", "II"}};
    return rep;
}

ScenarioReport theorem2(int m, std::optional<Window> window)
{
    require_positive("m", m);
    auto rep = column_zero_run("theorem2", 2, m, rp_odd_mod2(m), "a^2", window);
    rep.inputs = {{"p", 2}, {"m", m}, {"case", "MOD2"}};
    return rep;
}

ScenarioReport forced_divisibility(int p, int m)
{
    require_odd_prime(p);
    require_positive("m", m, 2);
    ScenarioReport rep;
    rep.scenario = "forced-divisibility";
    rep.inputs = {{"p", p}, {"m", m}, {"case", "I"}};
    auto [e2, page] = fibration(lens_space(p, m), p, 2 * m);
    const auto spec = make_spec(*e2, 2, {{"t", "0"}, {"a", "0"}, {"b", "t*a"}});
    Check c{"d_2(b) = t a is consistent with b^m = 0", true, ""};
    try {
        PageDifferential d(page, spec);
        rep.verdict = "ADMISSIBLE";
        c.detail = "p divides m";
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::IncompatibleDifferential)
            throw;
        rep.verdict = "REJECTED";
        rep.reason = std::string("ForcedDivisibility: ") + e.what();
        c.pass = false;
        c.detail = e.what();
    }
    rep.checks.push_back(c);
    finish(rep, m % p == 0 ? "ADMISSIBLE" : "REJECTED");
    return rep;
}

ScenarioReport no_transgression_contradiction(int p, int n, std::optional<Window> window)
{
    require_odd_prime(p);
    require_positive("n", n);
    ScenarioReport rep;
    rep.scenario = "no-transgression";
    rep.inputs = {{"p", p}, {"n", n}, {"m", n * p}, {"case", "I"}};
    const int m = n * p;
    const int target = 2 * n * p;
    window_check(rep, window, p, target);
    auto [e2, page] = fibration(lens_space(p, m), p, target, window);
    const RunResult res = run(page, case1_specs(*e2, p, false), target);
    rep.total_dims = res.total_dims;
    rep.transcript = transcript_json(res);

    std::optional<int> witness;
    for (int j = 2 * m - 1; j <= target; ++j)
        if (res.total_dims[static_cast<std::size_t>(j)] > 0) {
            witness = j;
            break;
        }
    rep.checks.push_back({"a nonzero total dimension in degree >= 2m - 1", witness.has_value(),
                          witness ? "H^" + std::to_string(*witness) + " != 0" : "none up to " + std::to_string(target)});
    auto survivor = res.e_inf.classify({0, 2 * p - 1}, e2->parse("a*" + pow_text("b", p - 1)));
    rep.checks.push_back({"[a b^(p-1)] survives to E_inf", survivor && !is_zero(*survivor), ""});
    rep.checks.push_back(collapse_check(res, 3));
    bool all = true;
    for (const auto& c : rep.checks)
        all = all && c.pass;
    rep.verdict = all ? "CONFIRMED" : "NOT-CONFIRMED";
    finish(rep, "CONFIRMED");
    return rep;
}

ScenarioReport example_hopf(int p, int m)
{
    PrimeField field(static_cast<Coeff>(p > 0 ? p : 0));
    require_positive("m", m);
    ScenarioReport rep;
    rep.scenario = "example-hopf";
    rep.inputs = {{"p", p}, {"m", m}};
    const auto base = complex_projective(p, m, 2 * m + 2);
    rep.expected_presentation = to_latex(base);
    const CharacteristicClass zero(base, Element{});
    const auto predicted = pushforward_dims(base, zero, 2 * m - 1);
    rep.total_dims = predicted;
    rep.checks.push_back(dims_check("alpha = 0 predicts the lens space Betti numbers", predicted,
                                    std::vector<int>(static_cast<std::size_t>(2 * m), 1)));
    const auto index = mod_p_index(base, zero);
    rep.index = index ? json(*index) : json("UNDEFINED");
    rep.checks.push_back({"index is undefined", !index.has_value(), ""});

    const auto orbit = p == 2 ? theorem2(m) : theorem1_case2(p, m);
    std::vector<int> cp = poincare_polynomial(base);
    cp.resize(orbit.total_dims.size());
    rep.checks.push_back(dims_check("orbit space run gives H*(CP^(m-1))", orbit.total_dims, cp));
    finish(rep, "PASS");
    return rep;
}

ScenarioReport d2_dichotomy(int p, int m)
{
    require_odd_prime(p);
    require_positive("m", m);
    ScenarioReport rep;
    rep.scenario = "d2-dichotomy";
    rep.inputs = {{"p", p}, {"m", m}};
    auto [e2, page] = fibration(lens_space(p, m), p, 2 * m);
    json consistent = json::array();
    bool matches = true;
    for (int lambda = 0; lambda < p; ++lambda)
        for (int mu = 0; mu < p; ++mu) {
            const auto spec = make_spec(*e2, 2, {{"t", "0"},
                                                 {"a", lambda ? std::to_string(lambda) + "*t" : "0"},
                                                 {"b", mu ? std::to_string(mu) + "*t*a" : "0"}});
            bool ok = true;
            try {
                PageDifferential d(page, spec);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::IncompatibleDifferential &&
                    e.kind() != ErrorKind::DifferentialNotSquareZero)
                    throw;
                ok = false;
            }
            if (ok)
                consistent.push_back({lambda, mu});
            const bool predicted = lambda * mu == 0 && (mu == 0 || m % p == 0);
            matches = matches && ok == predicted;
        }
    rep.checks.push_back({"consistent assignments are lambda mu = 0 with mu = 0 unless p | m", matches,
                          "consistent (lambda, mu): " + consistent.dump()});
    finish(rep, "PASS");
    return rep;
}

ScenarioReport mod2_alpha(int m)
{
    require_positive("m", m);
    ScenarioReport rep;
    rep.scenario = "mod2-alpha";
    rep.inputs = {{"p", 2}, {"m", m}};
    const auto base = complex_projective(2, m, 2 * m + 2);
    const std::vector<int> rp(static_cast<std::size_t>(2 * m), 1);
    std::vector<std::string> matching;
    for (const std::string alpha : {"0", "z"}) {
        const CharacteristicClass c = CharacteristicClass::parse(base, alpha);
        if (c.is_zero() && alpha != "0")
            continue;
        if (pushforward_dims(base, c, 2 * m - 1) == rp)
            matching.push_back(alpha);
    }
    rep.checks.push_back({"only alpha = 0 predicts the Betti numbers of RP^(2m-1)",
                          matching == std::vector<std::string>{"0"},
                          "matching: " + json(matching).dump()});
    finish(rep, "PASS");
    return rep;
}

std::vector<ScenarioReport> run_batch(const std::vector<ScenarioJob>& jobs)
{
    std::vector<std::future<ScenarioReport>> futures;
    futures.reserve(jobs.size());
    for (const auto& job : jobs)
        futures.push_back(std::async(std::launch::async, job));
    std::vector<ScenarioReport> out;
    out.reserve(jobs.size());
    for (auto& f : futures)
        out.push_back(f.get());
    return out;
}

std::vector<ScenarioJob> catalogue(int max_p, int max_n, int max_m)
{
    std::vector<ScenarioJob> jobs;
    for (int p = 2; p <= max_p; ++p) {
        if (!is_prime(p))
            continue;
        if (p == 2) {
            for (int m = 1; m <= max_m; ++m) {
                jobs.push_back([m] { return theorem2(m); });
                jobs.push_back([m] { return mod2_alpha(m); });
                jobs.push_back([m] { return example_hopf(2, m); });
            }
            continue;
        }
        for (int n = 1; n <= max_n; ++n) {
            jobs.push_back([p, n] { return theorem1_case1(p, n); });
            jobs.push_back([p, n] { return no_transgression_contradiction(p, n); });
        }
        for (int m = 1; m <= max_m; ++m) {
            jobs.push_back([p, m] { return theorem1_case2(p, m); });
            jobs.push_back([p, m] { return d2_dichotomy(p, m); });
            jobs.push_back([p, m] { return example_hopf(p, m); });
            if (m >= 2)
                jobs.push_back([p, m] { return forced_divisibility(p, m); });
        }
    }
    return jobs;
}

} // namespace orbitcoh
