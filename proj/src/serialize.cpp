#include "orbitcoh/serialize.hpp"

#include "orbitcoh/error.hpp"

#include <cctype>
#include <sstream>

namespace orbitcoh {

json to_json(const RingPresentation&, const Monomial& m)
{
    return m.exponents;
}

json to_json(const RingPresentation& pres)
{
    json gens = json::array();
    for (const auto& g : pres.generators())
        gens.push_back({{"name", g.name}, {"degree", g.degree}});
    json rels = json::array();
    for (const auto& r : pres.relations()) {
        json rhs = json::array();
        for (const auto& t : r.rhs)
            rhs.push_back({{"coeff", t.coeff}, {"monomial", t.monomial.exponents}});
        rels.push_back({{"lead", r.lead.exponents}, {"rhs", rhs}});
    }
    json meta = json::object();
    for (const auto& [k, v] : pres.metadata())
        meta[k] = v;
    return {{"p", pres.field().p()},
            {"generators", gens},
            {"relations", rels},
            {"truncation", pres.truncation()},
            {"metadata", meta}};
}

RingPresentation presentation_from_json(const json& j)
{
    try {
        std::vector<Generator> gens;
        for (const auto& g : j.at("generators"))
            gens.push_back({g.at("name").get<std::string>(), g.at("degree").get<int>()});
        std::vector<Relation> rels;
        for (const auto& r : j.at("relations")) {
            Relation rel{Monomial{r.at("lead").get<std::vector<int>>()}, {}};
            if (r.contains("rhs"))
                for (const auto& t : r.at("rhs"))
                    rel.rhs.push_back({static_cast<Coeff>(t.at("coeff").get<long>() % j.at("p").get<long>()),
                                       Monomial{t.at("monomial").get<std::vector<int>>()}});
            rels.push_back(std::move(rel));
        }
        Metadata meta;
        if (j.contains("metadata"))
            for (const auto& [k, v] : j.at("metadata").items())
                meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
        return RingPresentation::build(PrimeField(j.at("p").get<long>()), std::move(gens), std::move(rels),
                                       j.at("truncation").get<int>(), std::move(meta));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed presentation: ") + e.what());
    }
}

namespace {

std::string latex_name(const std::string& name)
{
    std::size_t cut = name.size();
    while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1])))
        --cut;
    if (cut == 0 || cut == name.size())
        return name;
    return name.substr(0, cut) + "_{" + name.substr(cut) + "}";
}

std::string latex_monomial(const RingPresentation& pres, const Monomial& m)
{
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < pres.num_generators(); ++i) {
        const int e = m.exponents[i];
        if (e == 0)
            continue;
        if (any)
            os << ' ';
        os << latex_name(pres.generators()[i].name);
        if (e > 1)
            os << "^{" << e << '}';
        any = true;
    }
    return any ? os.str() : "1";
}

std::string latex_relation(const RingPresentation& pres, const Relation& r)
{
    std::ostringstream os;
    os << latex_monomial(pres, r.lead);
    for (const auto& t : r.rhs) {
        os << " - ";
        if (t.coeff != 1)
            os << t.coeff;
        os << latex_monomial(pres, t.monomial);
    }
    return os.str();
}

} // namespace

std::string to_latex(const RingPresentation& pres)
{
    const auto p = pres.field().p();
    const std::string field = "\\mathbb{Z}_{" + std::to_string(p) + "}";

    // Odd generators that no relation mentions form an exterior factor.
    std::vector<bool> exterior(pres.num_generators(), false);
    if (p != 2)
        for (std::size_t i = 0; i < pres.num_generators(); ++i) {
            if (!pres.generators()[i].odd())
                continue;
            bool mentioned = false;
            for (const auto& r : pres.relations()) {
                mentioned = mentioned || r.lead.exponents[i] != 0;
                for (const auto& t : r.rhs)
                    mentioned = mentioned || t.monomial.exponents[i] != 0;
            }
            exterior[i] = !mentioned;
        }

    std::ostringstream os;
    std::vector<std::string> ext, poly;
    for (std::size_t i = 0; i < pres.num_generators(); ++i)
        (exterior[i] ? ext : poly).push_back(latex_name(pres.generators()[i].name));
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ", " : "") + v[i];
        return s;
    };
    if (!ext.empty()) {
        os << "\\wedge(" << join(ext) << ")";
        if (!poly.empty())
            os << "\\otimes";
    }
    if (!poly.empty() || ext.empty()) {
        os << field;
        if (!poly.empty())
            os << '[' << join(poly) << ']';
        if (!pres.relations().empty()) {
            os << "/\\langle ";
            for (std::size_t i = 0; i < pres.relations().size(); ++i)
                os << (i ? ", " : "") << latex_relation(pres, pres.relations()[i]);
            os << "\\rangle";
        }
    }
    return os.str();
}

std::string to_text(const RingPresentation& pres)
{
    std::ostringstream os;
    os << "Z_" << pres.field().p() << '[';
    for (std::size_t i = 0; i < pres.num_generators(); ++i)
        os << (i ? ", " : "") << pres.generators()[i].name;
    os << ']';
    if (!pres.relations().empty()) {
        os << " / (";
        for (std::size_t i = 0; i < pres.relations().size(); ++i) {
            const auto& r = pres.relations()[i];
            os << (i ? ", " : "") << pres.format(r.lead);
            Element rhs;
            for (const auto& t : r.rhs)
                rhs.add_term(pres.field(), t.monomial, t.coeff);
            if (!rhs.is_zero())
                os << " = " << pres.format(rhs);
        }
        os << ')';
    }
    os << "\n  degrees:";
    for (const auto& g : pres.generators())
        os << ' ' << g.name << '=' << g.degree;
    os << "\n  truncation: " << pres.truncation();
    os << "\n  poincare:";
    for (int d : poincare_polynomial(pres))
        os << ' ' << d;
    for (const auto& [k, v] : pres.metadata())
        os << "\n  " << k << ": " << v;
    os << '\n';
    return os.str();
}

} // namespace orbitcoh
