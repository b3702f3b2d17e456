#include "orbitcoh/presentation.hpp"

#include "orbitcoh/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace orbitcoh {

Coeff Element::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

void Element::add_term(const PrimeField& f, const Monomial& m, Coeff c)
{
    c %= f.p();
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second = f.add(it->second, c);
        if (it->second == 0)
            terms_.erase(it);
    }
}

namespace {

void enumerate_rec(const std::vector<Generator>& gens, bool odd_squares_vanish, std::size_t i, int remaining,
                   std::vector<int>& exps, std::vector<Monomial>& out)
{
    if (i == gens.size()) {
        if (remaining == 0)
            out.push_back(Monomial{exps});
        return;
    }
    const int deg = gens[i].degree;
    int max_e = remaining / deg;
    if (odd_squares_vanish && gens[i].odd())
        max_e = std::min(max_e, 1);
    for (int e = 0; e <= max_e; ++e) {
        exps[i] = e;
        enumerate_rec(gens, odd_squares_vanish, i + 1, remaining - e * deg, exps, out);
    }
    exps[i] = 0;
}

bool divides(const Monomial& d, const Monomial& m)
{
    for (std::size_t i = 0; i < m.exponents.size(); ++i)
        if (d.exponents[i] > m.exponents[i])
            return false;
    return true;
}

Monomial sum(const Monomial& a, const Monomial& b)
{
    Monomial r = a;
    for (std::size_t i = 0; i < r.exponents.size(); ++i)
        r.exponents[i] += b.exponents[i];
    return r;
}

Monomial difference(const Monomial& a, const Monomial& b)
{
    Monomial r = a;
    for (std::size_t i = 0; i < r.exponents.size(); ++i)
        r.exponents[i] -= b.exponents[i];
    return r;
}

constexpr long kRewriteLimit = 10'000'000;

} // namespace

std::vector<Monomial> enumerate_monomials(const std::vector<Generator>& gens, bool odd_squares_vanish, int degree)
{
    std::vector<Monomial> out;
    if (degree < 0)
        return out;
    std::vector<int> exps(gens.size(), 0);
    enumerate_rec(gens, odd_squares_vanish, 0, degree, exps, out);
    return out;
}

RingPresentation RingPresentation::build(PrimeField field, std::vector<Generator> generators,
                                         std::vector<Relation> relations, int truncation, Metadata metadata)
{
    if (truncation < 0)
        throw Error(ErrorKind::InvalidParams, "truncation must be non-negative");
    std::set<std::string> names;
    for (const auto& g : generators) {
        if (g.name.empty())
            throw Error(ErrorKind::InvalidParams, "generator with empty name");
        if (g.degree <= 0)
            throw Error(ErrorKind::InvalidParams, "generator " + g.name + " must have positive degree");
        if (!names.insert(g.name).second)
            throw Error(ErrorKind::DuplicateGenerator, g.name);
    }

    RingPresentation pres(field);
    pres.generators_ = std::move(generators);
    pres.truncation_ = truncation;
    pres.metadata_ = std::move(metadata);
    const std::size_t n = pres.generators_.size();

    for (auto& rel : relations) {
        if (rel.lead.exponents.size() != n)
            throw Error(ErrorKind::InvalidParams, "relation lead has wrong arity");
        if (std::any_of(rel.lead.exponents.begin(), rel.lead.exponents.end(), [](int e) { return e < 0; }))
            throw Error(ErrorKind::InvalidParams, "negative exponent in relation lead");
        const int lead_deg = pres.degree(rel.lead);
        if (lead_deg == 0)
            throw Error(ErrorKind::InvalidParams, "relation lead must not be the unit");
        if (!pres.admissible(rel.lead))
            throw Error(ErrorKind::InvalidParams,
                        "relation lead " + pres.format(rel.lead) + " already vanishes by graded commutativity");
        std::vector<Term> rhs;
        for (auto& t : rel.rhs) {
            if (t.monomial.exponents.size() != n)
                throw Error(ErrorKind::InvalidParams, "relation term has wrong arity");
            t.coeff = field.reduce(t.coeff);
            if (t.coeff == 0)
                continue;
            if (pres.degree(t.monomial) != lead_deg)
                throw Error(ErrorKind::NonHomogeneousRelation,
                            pres.format(rel.lead) + " -> " + pres.format(t.monomial));
            if (pres.compare(t.monomial, rel.lead) != std::strong_ordering::less)
                throw Error(ErrorKind::NonterminatingRewrite,
                            "rhs term " + pres.format(t.monomial) + " is not smaller than lead " + pres.format(rel.lead));
            rhs.push_back(std::move(t));
        }
        rel.rhs = std::move(rhs);
    }
    pres.relations_ = std::move(relations);

    pres.check_confluence();

    pres.bases_.resize(static_cast<std::size_t>(truncation) + 1);
    pres.index_.resize(static_cast<std::size_t>(truncation) + 1);
    for (int d = 0; d <= truncation; ++d) {
        auto& basis = pres.bases_[static_cast<std::size_t>(d)];
        for (auto& m : enumerate_monomials(pres.generators_, field.p() != 2, d))
            if (pres.is_normal(m))
                basis.push_back(std::move(m));
        std::sort(basis.begin(), basis.end(),
                  [&](const Monomial& a, const Monomial& b) { return pres.compare(a, b) < 0; });
        for (std::size_t i = 0; i < basis.size(); ++i)
            pres.index_[static_cast<std::size_t>(d)].emplace(basis[i], i);
    }
    return pres;
}

void RingPresentation::check_confluence() const
{
    for (int d = 1; d <= truncation_; ++d) {
        for (const auto& m : enumerate_monomials(generators_, field_.p() != 2, d)) {
            std::optional<Element> reference;
            const Relation* ref_rel = nullptr;
            for (const auto& rel : relations_) {
                if (!divides(rel.lead, m))
                    continue;
                Element nf = reduce(m, 1, &rel);
                if (!reference) {
                    reference = std::move(nf);
                    ref_rel = &rel;
                } else if (nf != *reference) {
                    throw Error(ErrorKind::NonConfluentRelations,
                                format(m) + " reduces to " + format(*reference) + " via " + format(ref_rel->lead) +
                                    " but to " + format(nf) + " via " + format(rel.lead));
                }
            }
        }
    }
}

std::optional<std::size_t> RingPresentation::generator_index(std::string_view name) const
{
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].name == name)
            return i;
    return std::nullopt;
}

Monomial RingPresentation::generator_monomial(std::size_t i, int exponent) const
{
    Monomial m = unit();
    m.exponents.at(i) = exponent;
    return m;
}

int RingPresentation::degree(const Monomial& m) const
{
    int d = 0;
    for (std::size_t i = 0; i < generators_.size(); ++i)
        d += m.exponents[i] * generators_[i].degree;
    return d;
}

std::optional<int> RingPresentation::degree(const Element& e) const
{
    std::optional<int> d;
    for (const auto& [m, c] : e.terms()) {
        const int dm = degree(m);
        if (d && *d != dm)
            throw Error(ErrorKind::NonHomogeneousRelation, "element " + format(e) + " is not homogeneous");
        d = dm;
    }
    return d;
}

bool RingPresentation::admissible(const Monomial& m) const
{
    if (field_.p() == 2)
        return true;
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].odd() && m.exponents[i] > 1)
            return false;
    return true;
}

bool RingPresentation::is_normal(const Monomial& m) const
{
    return admissible(m) && first_divisor(m) == nullptr;
}

std::strong_ordering RingPresentation::compare(const Monomial& a, const Monomial& b) const
{
    if (auto c = degree(a) <=> degree(b); c != 0)
        return c;
    return a.exponents <=> b.exponents;
}

const std::vector<Monomial>& RingPresentation::basis(int degree) const
{
    if (degree < 0 || degree > truncation_)
        throw Error(ErrorKind::DegreeOutOfWindow,
                    "degree " + std::to_string(degree) + " outside 0.." + std::to_string(truncation_));
    return bases_[static_cast<std::size_t>(degree)];
}

std::optional<std::size_t> RingPresentation::basis_index(const Monomial& m) const
{
    const int d = degree(m);
    if (d < 0 || d > truncation_)
        return std::nullopt;
    const auto& idx = index_[static_cast<std::size_t>(d)];
    auto it = idx.find(m);
    if (it == idx.end())
        return std::nullopt;
    return it->second;
}

int RingPresentation::product_sign(const Monomial& u, const Monomial& v) const
{
    // Moving each odd factor of v left past the odd factors of u with a
    // larger generator index.
    int sign = 0;
    int odd_after = 0;
    for (std::size_t i = generators_.size(); i-- > 0;) {
        if (!generators_[i].odd())
            continue;
        sign += v.exponents[i] * odd_after;
        odd_after += u.exponents[i];
    }
    return sign & 1;
}

const Relation* RingPresentation::first_divisor(const Monomial& m) const
{
    for (const auto& rel : relations_)
        if (divides(rel.lead, m))
            return &rel;
    return nullptr;
}

Element RingPresentation::reduce(const Monomial& m, Coeff c, const Relation* first) const
{
    Element out;
    std::vector<std::pair<Monomial, Coeff>> stack{{m, c}};
    long steps = 0;
    while (!stack.empty()) {
        auto [mono, coeff] = std::move(stack.back());
        stack.pop_back();
        if (coeff == 0 || !admissible(mono))
            continue;
        const Relation* rel = first ? first : first_divisor(mono);
        first = nullptr;
        if (!rel) {
            out.add_term(field_, mono, coeff);
            continue;
        }
        if (++steps > kRewriteLimit)
            throw Error(ErrorKind::NonterminatingRewrite, "rewrite limit exceeded reducing " + format(m));
        // lead*q = (-1)^s mono, so mono = (-1)^s rhs*q
        const Monomial q = difference(mono, rel->lead);
        const Coeff s = field_.sign(product_sign(rel->lead, q));
        for (const auto& t : rel->rhs) {
            Monomial w = sum(t.monomial, q);
            if (!admissible(w))
                continue;
            const Coeff s2 = field_.sign(product_sign(t.monomial, q));
            stack.emplace_back(std::move(w), field_.mul(field_.mul(coeff, t.coeff), field_.mul(s, s2)));
        }
    }
    return out;
}

Element RingPresentation::normal_form(const Monomial& m, Coeff c) const
{
    return reduce(m, field_.reduce(c), nullptr);
}

Element RingPresentation::monomial_product(const Monomial& u, const Monomial& v) const
{
    Monomial w = sum(u, v);
    if (!admissible(w))
        return {};
    return normal_form(w, field_.sign(product_sign(u, v)));
}

Element RingPresentation::multiply(const Element& u, const Element& v) const
{
    Element out;
    if (u.is_zero() || v.is_zero())
        return out;
    const int du = degree(u.terms().begin()->first);
    const int dv = degree(v.terms().begin()->first);
    if (du + dv > truncation_)
        throw Error(ErrorKind::DegreeOverflow, "product of degree " + std::to_string(du + dv) +
                                                   " exceeds truncation " + std::to_string(truncation_));
    for (const auto& [mu, cu] : u.terms())
        for (const auto& [mv, cv] : v.terms()) {
            Element prod = monomial_product(mu, mv);
            const Coeff c = field_.mul(cu, cv);
            for (const auto& [mw, cw] : prod.terms())
                out.add_term(field_, mw, field_.mul(c, cw));
        }
    return out;
}

Element RingPresentation::add(const Element& u, const Element& v) const
{
    Element out = u;
    for (const auto& [m, c] : v.terms())
        out.add_term(field_, m, c);
    return out;
}

Element RingPresentation::scale(Coeff c, const Element& u) const
{
    Element out;
    c = field_.reduce(c);
    for (const auto& [m, cu] : u.terms())
        out.add_term(field_, m, field_.mul(c, cu));
    return out;
}

Element RingPresentation::power(const Element& u, int e) const
{
    if (e < 0)
        throw Error(ErrorKind::InvalidParams, "negative power");
    Element out = one();
    for (int i = 0; i < e; ++i)
        out = multiply(out, u);
    return out;
}

Vec RingPresentation::to_vector(const Element& e, int degree) const
{
    const auto& b = basis(degree);
    Vec v(b.size(), 0);
    for (const auto& [m, c] : e.terms()) {
        auto idx = basis_index(m);
        if (!idx || this->degree(m) != degree)
            throw Error(ErrorKind::NonHomogeneousRelation,
                        "term " + format(m) + " is not a degree-" + std::to_string(degree) + " basis monomial");
        v[*idx] = c;
    }
    return v;
}

Element RingPresentation::from_vector(int degree, const Vec& v) const
{
    const auto& b = basis(degree);
    Element out;
    for (std::size_t i = 0; i < b.size(); ++i)
        out.add_term(field_, b[i], v[i]);
    return out;
}

namespace {

class ElementParser {
public:
    ElementParser(const RingPresentation& pres, std::string_view text) : pres_(pres), text_(text) {}

    Element parse()
    {
        const auto& f = pres_.field();
        Element result;
        skip();
        bool negative = false;
        if (peek() == '-' || peek() == '+') {
            negative = text_[pos_] == '-';
            ++pos_;
        }
        while (true) {
            Element term = parse_term();
            result = pres_.add(result, negative ? pres_.scale(f.neg(1), term) : term);
            skip();
            if (pos_ == text_.size())
                break;
            const char op = text_[pos_];
            if (op != '+' && op != '-')
                fail("expected + or -");
            negative = op == '-';
            ++pos_;
        }
        return result;
    }

private:
    char peek()
    {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    [[noreturn]] void fail(const std::string& why)
    {
        throw Error(ErrorKind::ParseError, why + " at position " + std::to_string(pos_) + " in \"" +
                                               std::string(text_) + "\"");
    }
    long number()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    Element parse_factor()
    {
        skip();
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            return pres_.scale(pres_.field().reduce(number()), pres_.one());
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_)
            fail("expected a generator name");
        const std::string name(text_.substr(start, pos_ - start));
        auto idx = pres_.generator_index(name);
        if (!idx)
            fail("unknown generator '" + name + "'");
        int e = 1;
        if (peek() == '^') {
            ++pos_;
            e = static_cast<int>(number());
        }
        return pres_.normal_form(pres_.generator_monomial(*idx, e));
    }

    Element parse_term()
    {
        Element term = parse_factor();
        while (peek() == '*') {
            ++pos_;
            term = pres_.multiply(term, parse_factor());
        }
        return term;
    }

    const RingPresentation& pres_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Element RingPresentation::parse(std::string_view text) const
{
    return ElementParser(*this, text).parse();
}

std::string RingPresentation::format(const Monomial& m) const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        if (m.exponents[i] == 0)
            continue;
        if (!first)
            os << '*';
        os << generators_[i].name;
        if (m.exponents[i] > 1)
            os << '^' << m.exponents[i];
        first = false;
    }
    return first ? "1" : os.str();
}

std::string RingPresentation::format(const Element& e) const
{
    if (e.is_zero())
        return "0";
    std::vector<std::pair<Monomial, Coeff>> terms(e.terms().begin(), e.terms().end());
    std::sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) { return compare(a.first, b.first) > 0; });
    std::ostringstream os;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i > 0)
            os << " + ";
        const auto& [m, c] = terms[i];
        const bool is_unit = degree(m) == 0;
        if (c != 1 || is_unit)
            os << c;
        if (!is_unit)
            os << (c != 1 ? "*" : "") << format(m);
    }
    return os.str();
}

std::vector<int> poincare_polynomial(const RingPresentation& pres)
{
    std::vector<int> dims;
    for (int d = 0; d <= pres.truncation(); ++d)
        dims.push_back(static_cast<int>(pres.basis(d).size()));
    return dims;
}

Matrix cup_map(const RingPresentation& pres, const Element& alpha, int source_degree, std::optional<int> alpha_degree)
{
    auto d = pres.degree(alpha);
    if (!d)
        d = alpha_degree;
    if (!d)
        throw Error(ErrorKind::InvalidParams, "degree of a zero class must be given");
    if (alpha_degree && *d != *alpha_degree)
        throw Error(ErrorKind::WrongDegreeAlpha, "class has degree " + std::to_string(*d));
    const int target = source_degree + *d;
    if (target > pres.truncation())
        throw Error(ErrorKind::DegreeOverflow,
                    "cup map into degree " + std::to_string(target) + " beyond truncation");
    const auto& src = pres.basis(source_degree);
    const auto& tgt = pres.basis(target);
    Matrix m(tgt.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
        const Vec col = pres.to_vector(pres.multiply(alpha, pres.normal_form(src[j])), target);
        for (std::size_t i = 0; i < tgt.size(); ++i)
            m(i, j) = col[i];
    }
    return m;
}

} // namespace orbitcoh
