#include "orbitcoh/models.hpp"

#include "orbitcoh/error.hpp"

#include <sstream>

namespace orbitcoh {

namespace {

void require(bool ok, const std::string& why)
{
    if (!ok)
        throw Error(ErrorKind::InvalidParams, why);
}

PrimeField prime_field(int p)
{
    if (!is_prime(p))
        throw Error(ErrorKind::InvalidParams, "p must be prime, got " + std::to_string(p));
    return PrimeField(p);
}

Relation zero_relation(std::vector<int> lead)
{
    return Relation{Monomial{std::move(lead)}, {}};
}

} // namespace

std::optional<ModelKind> parse_model_kind(std::string_view name)
{
    if (name == "lens")
        return ModelKind::Lens;
    if (name == "rp")
        return ModelKind::RpOddMod2;
    if (name == "cp")
        return ModelKind::Cp;
    if (name == "bg")
        return ModelKind::BgTrunc;
    return std::nullopt;
}

std::string_view to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::Lens: return "lens";
    case ModelKind::RpOddMod2: return "rp";
    case ModelKind::Cp: return "cp";
    case ModelKind::BgTrunc: return "bg";
    }
    return "unknown";
}

RingPresentation model_space(ModelKind kind, const ModelParams& params)
{
    switch (kind) {
    case ModelKind::Lens: return lens_space(params.p, params.m, params.truncation);
    case ModelKind::RpOddMod2:
        require(params.p == 2, "the real projective model is mod 2");
        return rp_odd_mod2(params.m, params.truncation);
    case ModelKind::Cp: return complex_projective(params.p, params.m, params.truncation);
    case ModelKind::BgTrunc: return bg_truncated(params.p, params.k, params.truncation);
    }
    throw Error(ErrorKind::InvalidParams, "unknown model kind");
}

RingPresentation lens_space(int p, int m, std::optional<int> truncation)
{
    const PrimeField f = prime_field(p);
    require(m >= 1, "m must be positive");
    std::ostringstream q;
    for (int i = 0; i < m; ++i)
        q << (i ? "," : "") << 1;
    Metadata meta{{"space", "L^" + std::to_string(2 * m - 1) + "(" + std::to_string(p) + ")"},
                  {"lens_q", q.str()},
                  {"bockstein", "beta(a)=b"}};
    return RingPresentation::build(f, {{"a", 1}, {"b", 2}}, {zero_relation({0, m})}, truncation.value_or(2 * m),
                                   std::move(meta));
}

RingPresentation rp_odd_mod2(int m, std::optional<int> truncation)
{
    require(m >= 1, "m must be positive");
    Metadata meta{{"space", "RP^" + std::to_string(2 * m - 1)}};
    return RingPresentation::build(PrimeField(2), {{"a", 1}}, {zero_relation({2 * m})}, truncation.value_or(2 * m),
                                   std::move(meta));
}

RingPresentation complex_projective(int p, int m, std::optional<int> truncation)
{
    const PrimeField f = prime_field(p);
    require(m >= 1, "m must be positive");
    Metadata meta{{"space", "CP^" + std::to_string(m - 1)}};
    return RingPresentation::build(f, {{"z", 2}}, {zero_relation({m})}, truncation.value_or(2 * m - 1),
                                   std::move(meta));
}

RingPresentation bg_truncated(int p, int k, std::optional<int> truncation)
{
    const PrimeField f = prime_field(p);
    require(k >= 0, "K must be non-negative");
    Metadata meta{{"space", "CP^" + std::to_string(k)}};
    return RingPresentation::build(f, {{"t", 2}}, {zero_relation({k + 1})}, truncation.value_or(2 * k),
                                   std::move(meta));
}

std::string y_name(int q)
{
    return "y" + std::to_string(q);
}

RingPresentation theorem1_ring(int p, int n, const PairConstants& a, const PairConstants& b,
                               std::optional<int> truncation)
{
    require(p % 2 == 1, "the orbit-space ring needs an odd prime");
    const PrimeField f = prime_field(p);
    require(n >= 1, "n must be positive");

    std::vector<Generator> gens;
    std::vector<int> qs;
    for (int q = 1; q <= 2 * p - 3; q += 2) {
        gens.push_back({y_name(q), q});
        qs.push_back(q);
    }
    const std::size_t ny = qs.size();
    const std::size_t ix = ny;
    const std::size_t iz = ny + 1;
    gens.push_back({"x", 2});
    gens.push_back({"z", 2 * p});
    const std::size_t ng = gens.size();

    auto mono = [&](std::initializer_list<std::pair<std::size_t, int>> parts) {
        Monomial m{std::vector<int>(ng, 0)};
        for (auto [i, e] : parts)
            m.exponents[i] += e;
        return m;
    };

    auto known = [&](int q) { return q >= 1 && q <= 2 * p - 3 && q % 2 == 1; };
    for (const auto& constants : {a, b})
        for (const auto& [key, _] : constants)
            require(known(key.first) && known(key.second), "no generator y" + std::to_string(key.first) + " or y" +
                                                               std::to_string(key.second));
    for (const auto& [key, _] : a) {
        auto [q1, q2] = key;
        require(q1 < q2 && q1 + q2 < 2 * p, "A constant only allowed for q < q' with q + q' < 2p");
    }
    for (const auto& [key, _] : b) {
        auto [q1, q2] = key;
        require(q1 < q2 && q1 + q2 > 2 * p, "B constant only allowed for q < q' with q + q' > 2p");
    }

    std::vector<Relation> rels;
    rels.push_back({mono({{ix, p}}), {}});
    rels.push_back({mono({{iz, n}}), {}});
    for (std::size_t i = 0; i < ny; ++i)
        rels.push_back({mono({{ix, 1}, {i, 1}}), {}});
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = i + 1; j < ny; ++j) {
            const int q1 = qs[i];
            const int q2 = qs[j];
            Relation rel{mono({{i, 1}, {j, 1}}), {}};
            if (auto it = a.find({q1, q2}); it != a.end() && f.reduce(it->second) != 0)
                rel.rhs.push_back({f.reduce(it->second), mono({{ix, (q1 + q2) / 2}})});
            if (auto it = b.find({q1, q2}); it != b.end() && f.reduce(it->second) != 0)
                rel.rhs.push_back({f.reduce(it->second), mono({{iz, 1}, {ix, (q1 + q2 - 2 * p) / 2}})});
            rels.push_back(std::move(rel));
        }

    Metadata meta{{"m", std::to_string(n * p)}, {"n", std::to_string(n)}, {"space", "X/G, case I"}};
    return RingPresentation::build(f, std::move(gens), std::move(rels), truncation.value_or(2 * n * p),
                                   std::move(meta));
}

} // namespace orbitcoh
