#include "orbitcoh/specseq.hpp"

#include "orbitcoh/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string_view>

namespace orbitcoh {

namespace {

std::string show(Bidegree b)
{
    return "(" + std::to_string(b.k) + "," + std::to_string(b.l) + ")";
}

/// Echelon basis with the largest monomial as pivot, rows sorted by pivot.
Echelon echelon(const PrimeField& f, std::vector<Vec> rows)
{
    Echelon e = row_reduce(f, std::move(rows), PivotOrder::Rightmost);
    std::vector<std::size_t> order(e.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return e.pivots[a] < e.pivots[b]; });
    Echelon sorted;
    for (auto i : order) {
        sorted.rows.push_back(std::move(e.rows[i]));
        sorted.pivots.push_back(e.pivots[i]);
    }
    return sorted;
}

const std::vector<Monomial> kEmptyBasis;

} // namespace

Window default_window(int p, int fiber_top, int target)
{
    return Window{2 * (target + 2 * p), fiber_top};
}

// ---------------------------------------------------------------------------
// E_2 algebra

SerreE2::SerreE2(RingPresentation algebra, std::size_t n_base, Window window)
    : algebra_(std::move(algebra)), n_base_(n_base), window_(window)
{
}

std::shared_ptr<const SerreE2> SerreE2::build(const RingPresentation& base, const RingPresentation& fiber,
                                              Window window)
{
    if (!(base.field() == fiber.field()))
        throw Error(ErrorKind::InvalidParams, "base and fiber over different fields");
    if (window.k_max < 0 || window.l_max < 0)
        throw Error(ErrorKind::WindowTooSmall, "negative window");
    for (const auto& g : base.generators())
        if (g.odd())
            throw Error(ErrorKind::InvalidParams, "base generator " + g.name + " has odd degree");

    const std::size_t nb = base.num_generators();
    const std::size_t nf = fiber.num_generators();
    std::vector<Generator> gens = base.generators();
    gens.insert(gens.end(), fiber.generators().begin(), fiber.generators().end());

    auto lift = [&](const Monomial& m, bool from_base) {
        Monomial out{std::vector<int>(nb + nf, 0)};
        std::copy(m.exponents.begin(), m.exponents.end(), out.exponents.begin() + (from_base ? 0 : nb));
        return out;
    };
    std::vector<Relation> rels;
    for (const auto& [src, from_base] : {std::pair{&base, true}, std::pair{&fiber, false}})
        for (const auto& r : src->relations()) {
            Relation lifted{lift(r.lead, from_base), {}};
            for (const auto& t : r.rhs)
                lifted.rhs.push_back({t.coeff, lift(t.monomial, from_base)});
            rels.push_back(std::move(lifted));
        }

    int max_deg = 1;
    for (const auto& g : gens)
        max_deg = std::max(max_deg, g.degree);
    // room for d applied to any relation lead
    const int truncation = window.k_max + window.l_max + max_deg + 1;

    Metadata meta{{"base", base.metadata().count("space") ? base.metadata().at("space") : "base"},
                  {"fiber", fiber.metadata().count("space") ? fiber.metadata().at("space") : "fiber"}};
    auto algebra = RingPresentation::build(base.field(), std::move(gens), std::move(rels), truncation, meta);

    std::shared_ptr<SerreE2> e2(new SerreE2(std::move(algebra), nb, window));
    for (int d = 0; d <= truncation; ++d)
        for (const auto& m : e2->algebra_.basis(d)) {
            const Bidegree b = e2->bidegree(m);
            if (!window.contains(b))
                throw Error(ErrorKind::WindowTooSmall, "class " + e2->algebra_.format(m) + " at " + show(b) +
                                                           " lies outside the window");
            auto& cell = e2->cells_[b];
            e2->index_[b].emplace(m, cell.size());
            cell.push_back(m);
        }
    return e2;
}

Bidegree SerreE2::bidegree(const Monomial& m) const
{
    Bidegree b;
    const auto& gens = algebra_.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
        (i < n_base_ ? b.k : b.l) += m.exponents[i] * gens[i].degree;
    return b;
}

std::optional<Bidegree> SerreE2::bidegree(const Element& e) const
{
    std::optional<Bidegree> b;
    for (const auto& [m, c] : e.terms()) {
        const Bidegree bm = bidegree(m);
        if (b && *b != bm)
            throw Error(ErrorKind::InvalidParams, "element " + format(e) + " is not bihomogeneous");
        b = bm;
    }
    return b;
}

const std::vector<Monomial>& SerreE2::cell_basis(Bidegree b) const
{
    auto it = cells_.find(b);
    return it == cells_.end() ? kEmptyBasis : it->second;
}

std::vector<Bidegree> SerreE2::cells() const
{
    std::vector<Bidegree> out;
    for (const auto& [b, _] : cells_)
        out.push_back(b);
    return out;
}

Vec SerreE2::to_cell(Bidegree b, const Element& e) const
{
    const auto& basis = cell_basis(b);
    Vec v(basis.size(), 0);
    if (e.is_zero())
        return v;
    auto it = index_.find(b);
    for (const auto& [m, c] : e.terms()) {
        if (it == index_.end() || !it->second.count(m))
            throw Error(ErrorKind::InvalidParams, "term " + algebra_.format(m) + " not in cell " + show(b));
        v[it->second.at(m)] = c;
    }
    return v;
}

Element SerreE2::from_cell(Bidegree b, const Vec& v) const
{
    const auto& basis = cell_basis(b);
    Element e;
    for (std::size_t i = 0; i < basis.size(); ++i)
        e.add_term(field(), basis[i], v[i]);
    return e;
}

DifferentialSpec make_spec(const SerreE2& e2, int r, const std::vector<std::pair<std::string, std::string>>& values)
{
    DifferentialSpec spec{r, {}};
    for (const auto& [src, tgt] : values)
        spec.assignments.push_back({e2.parse(src), e2.parse(tgt)});
    return spec;
}

// ---------------------------------------------------------------------------
// Pages

BigradedPage BigradedPage::e2(std::shared_ptr<const SerreE2> algebra)
{
    BigradedPage page;
    page.algebra_ = std::move(algebra);
    page.r_ = 2;
    const auto& f = page.algebra_->field();
    for (const auto& b : page.algebra_->cells()) {
        const std::size_t n = page.algebra_->cell_basis(b).size();
        std::vector<Vec> rows;
        for (std::size_t i = 0; i < n; ++i) {
            Vec v(n, 0);
            v[i] = 1;
            rows.push_back(std::move(v));
        }
        page.cells_[b] = Cell{Echelon{}, echelon(f, std::move(rows))};
    }
    return page;
}

BigradedPage BigradedPage::advanced() const
{
    BigradedPage next = *this;
    ++next.r_;
    return next;
}

const BigradedPage::Cell* BigradedPage::cell(Bidegree b) const
{
    auto it = cells_.find(b);
    return it == cells_.end() ? nullptr : &it->second;
}

int BigradedPage::dim(Bidegree b) const
{
    const Cell* c = cell(b);
    return c ? static_cast<int>(c->classes.rank()) : 0;
}

std::vector<Bidegree> BigradedPage::support() const
{
    std::vector<Bidegree> out;
    for (const auto& [b, c] : cells_)
        if (c.classes.rank() > 0)
            out.push_back(b);
    return out;
}

int BigradedPage::total_dim(int degree) const
{
    int sum = 0;
    for (const auto& [b, c] : cells_)
        if (b.total() == degree)
            sum += static_cast<int>(c.classes.rank());
    return sum;
}

Element BigradedPage::representative(Bidegree b, std::size_t i) const
{
    const Cell* c = cell(b);
    if (!c || i >= c->classes.rank())
        throw Error(ErrorKind::InvalidParams, "no class " + std::to_string(i) + " at " + show(b));
    return algebra_->from_cell(b, c->classes.rows[i]);
}

Element BigradedPage::lift(Bidegree b, const Vec& coords) const
{
    const Cell* c = cell(b);
    if (!c) {
        if (!is_zero(coords))
            throw Error(ErrorKind::InvalidParams, "nonzero coordinates at empty cell " + show(b));
        return {};
    }
    const auto& f = algebra_->field();
    Vec ambient(algebra_->cell_basis(b).size(), 0);
    for (std::size_t i = 0; i < coords.size(); ++i)
        axpy(f, coords[i], c->classes.rows[i], ambient);
    return algebra_->from_cell(b, ambient);
}

std::optional<Vec> BigradedPage::classify_vector(Bidegree b, Vec ambient) const
{
    const Cell* c = cell(b);
    if (!c) {
        if (!is_zero(ambient))
            return std::nullopt;
        return Vec{};
    }
    const auto& f = algebra_->field();
    reduce_against(f, c->boundaries, ambient);
    Vec coeffs;
    reduce_against(f, c->classes, ambient, &coeffs);
    if (!is_zero(ambient))
        return std::nullopt;
    return coeffs;
}

std::optional<Vec> BigradedPage::classify(Bidegree b, const Element& e) const
{
    if (e.is_zero())
        return Vec(static_cast<std::size_t>(dim(b)), 0);
    if (algebra_->bidegree(e) != b)
        throw Error(ErrorKind::InvalidParams, "element " + algebra_->format(e) + " does not live at " + show(b));
    return classify_vector(b, algebra_->to_cell(b, e));
}

Vec BigradedPage::multiply(Bidegree bu, const Vec& u, Bidegree bv, const Vec& v) const
{
    const Bidegree b = bu + bv;
    Vec zero(static_cast<std::size_t>(dim(b)), 0);
    const Window w = window();
    if (!w.contains(b) || !w.contains(bu) || !w.contains(bv))
        return zero;
    const Element prod = algebra_->algebra().multiply(lift(bu, u), lift(bv, v));
    auto coords = classify(b, prod);
    if (!coords)
        throw Error(ErrorKind::InvalidParams, "product of classes is not a cycle at " + show(b));
    return *coords;
}

// ---------------------------------------------------------------------------
// Differentials

namespace {

struct Gen {
    Bidegree deg;
    Element rep;
    Element value;
    bool odd = false;
};

struct Word {
    std::vector<int> exponents;
    Vec product;   // class coordinates at the word's bidegree
    Vec value;     // class coordinates of d(word) at bidegree + shift
};

class WordBuilder {
public:
    WordBuilder(const BigradedPage& page, const std::vector<Gen>& gens, Bidegree shift, int max_total, int strict)
        : page_(page), alg_(page.algebra().algebra()), gens_(gens), shift_(shift), max_total_(max_total),
          strict_(strict),
          window_(page.window()), odd_squares_vanish_(alg_.field().p() != 2)
    {
    }

    std::map<Bidegree, std::vector<Word>> build()
    {
        std::vector<int> exps(gens_.size(), 0);
        recurse(0, Bidegree{}, alg_.one(), Element{}, exps);
        return std::move(words_);
    }

private:
    // multiply, knowing the bidegree of the result; zero when it leaves the window
    Element mul(const Element& u, const Element& v, Bidegree result) const
    {
        if (!window_.contains(result) || u.is_zero() || v.is_zero())
            return {};
        return alg_.multiply(u, v);
    }

    void recurse(std::size_t i, Bidegree deg, const Element& prod, const Element& dval, std::vector<int>& exps)
    {
        if (i == gens_.size()) {
            record(deg, prod, dval, exps);
            return;
        }
        recurse(i + 1, deg, prod, dval, exps);
        const Gen& g = gens_[i];
        Element pow = alg_.one();  // g^e
        Element prev = pow;        // g^{e-1}
        for (int e = 1;; ++e) {
            if (odd_squares_vanish_ && g.odd && e > 1)
                break;
            const Bidegree ge{g.deg.k * e, g.deg.l * e};
            const Bidegree nd = deg + ge;
            if (!window_.contains(nd) || nd.total() > max_total_)
                break;
            prev = pow;
            pow = mul(pow, g.rep, ge);
            // d(g^e) = e g^{e-1} d(g)
            Element dpow;
            if (!g.value.is_zero())
                dpow = alg_.scale(static_cast<Coeff>(e % alg_.field().p()), mul(prev, g.value, ge + shift_));
            const Element nprod = mul(prod, pow, nd);
            Element ndval = mul(dval, pow, nd + shift_);
            const Element second = mul(prod, dpow, nd + shift_);
            ndval = alg_.add(ndval, deg.total() % 2 ? alg_.scale(alg_.field().neg(1), second) : second);
            exps[i] = e;
            recurse(i + 1, nd, nprod, ndval, exps);
        }
        exps[i] = 0;
    }

    void record(Bidegree deg, const Element& prod, const Element& dval, const std::vector<int>& exps)
    {
        Word w;
        w.exponents = exps;
        auto pc = page_.classify(deg, prod);
        const bool strict = deg.total() <= strict_;
        if (!pc && !strict)
            return;
        if (!pc)
            throw Error(ErrorKind::InvalidDifferential,
                        "product " + alg_.format(prod) + " at " + show(deg) + " is not a cycle on this page");
        w.product = std::move(*pc);
        const Bidegree t = deg + shift_;
        if (window_.contains(t)) {
            auto vc = page_.classify(t, dval);
            if (!vc && !strict)
                return;
            if (!vc)
                throw Error(ErrorKind::InvalidDifferential,
                            "value " + alg_.format(dval) + " at " + show(t) + " is not a cycle on this page");
            w.value = std::move(*vc);
        }
        words_[deg].push_back(std::move(w));
    }

    const BigradedPage& page_;
    const RingPresentation& alg_;
    const std::vector<Gen>& gens_;
    Bidegree shift_;
    int max_total_;
    int strict_;
    Window window_;
    bool odd_squares_vanish_;
    std::map<Bidegree, std::vector<Word>> words_;
};

std::string describe_word(const std::vector<Gen>& gens, const SerreE2& e2, const std::vector<int>& exps)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (exps[i] == 0)
            continue;
        os << (first ? "" : "*") << "[" << e2.format(gens[i].rep) << "]";
        if (exps[i] > 1)
            os << "^" << exps[i];
        first = false;
    }
    return first ? "1" : os.str();
}

// Leibniz value of a monomial in the generators of the E_2 presentation.
Element derivation_on_monomial(const RingPresentation& alg, const std::vector<Element>& values, const Monomial& m)
{
    Element prod = alg.one();
    Element dval;
    int deg = 0;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        const int e = m.exponents[i];
        if (e == 0)
            continue;
        const Element gprev = alg.normal_form(alg.generator_monomial(i, e - 1));
        const Element gpow = alg.normal_form(alg.generator_monomial(i, e));
        Element dpow = alg.scale(static_cast<Coeff>(e % alg.field().p()), alg.multiply(gprev, values[i]));
        Element second = alg.multiply(prod, dpow);
        if (deg % 2)
            second = alg.scale(alg.field().neg(1), second);
        dval = alg.add(alg.multiply(dval, gpow), second);
        prod = alg.multiply(prod, gpow);
        deg += e * alg.generators()[i].degree;
    }
    return dval;
}

void check_presentation_relations(const SerreE2& e2, const DifferentialSpec& spec)
{
    const auto& alg = e2.algebra();
    std::vector<std::optional<Element>> values(alg.num_generators());
    for (const auto& a : spec.assignments)
        for (std::size_t i = 0; i < alg.num_generators(); ++i)
            if (a.source == alg.normal_form(alg.generator_monomial(i)))
                values[i] = a.target;
    for (const auto& rel : alg.relations()) {
        bool assigned = true;
        for (std::size_t i = 0; i < rel.lead.exponents.size(); ++i)
            if (rel.lead.exponents[i] > 0 && !values[i])
                assigned = false;
        for (const auto& t : rel.rhs)
            for (std::size_t i = 0; i < t.monomial.exponents.size(); ++i)
                if (t.monomial.exponents[i] > 0 && !values[i])
                    assigned = false;
        if (!assigned || alg.degree(rel.lead) + 1 > alg.truncation())
            continue;
        std::vector<Element> vals;
        for (const auto& v : values)
            vals.push_back(v.value_or(Element{}));
        Element lhs = derivation_on_monomial(alg, vals, rel.lead);
        Element rhs;
        for (const auto& t : rel.rhs)
            rhs = alg.add(rhs, alg.scale(t.coeff, derivation_on_monomial(alg, vals, t.monomial)));
        if (lhs != rhs) {
            Element rel_rhs;
            for (const auto& t : rel.rhs)
                rel_rhs.add_term(alg.field(), t.monomial, t.coeff);
            throw Error(ErrorKind::IncompatibleDifferential,
                        "d_2 does not respect " + alg.format(rel.lead) + " = " + alg.format(rel_rhs) + ": d(" +
                            alg.format(rel.lead) + ") = " + alg.format(lhs) + " but d(rhs) = " + alg.format(rhs));
        }
    }
}

} // namespace

PageDifferential::PageDifferential(const BigradedPage& page, const DifferentialSpec& spec,
                                   std::optional<int> max_total, std::optional<int> strict_total)
    : r_(spec.r), field_(page.algebra().field()), window_(page.window())
{
    const SerreE2& e2 = page.algebra();
    const Window w = page.window();
    max_total_ = max_total.value_or(w.k_max + w.l_max);
    strict_total_ = std::min(max_total_, strict_total.value_or(max_total_));
    if (spec.r < 2)
        throw Error(ErrorKind::InvalidDifferential, "page index must be at least 2");
    if (spec.r != page.r())
        throw Error(ErrorKind::InvalidDifferential,
                    "spec for d_" + std::to_string(spec.r) + " applied to E_" + std::to_string(page.r()));
    for (const auto& b : e2.cells())
        dims_[b] = page.dim(b);

    std::vector<Gen> gens;
    for (const auto& a : spec.assignments) {
        auto sb = e2.bidegree(a.source);
        if (!sb) {
            if (!a.target.is_zero())
                throw Error(ErrorKind::IncompatibleDifferential,
                            "a source that is zero in E_2 gets the nonzero value " + e2.format(a.target));
            continue;
        }
        if (*sb == Bidegree{})
            throw Error(ErrorKind::InvalidDifferential, "the unit cannot be a generator");
        if (!page.classify(*sb, a.source))
            throw Error(ErrorKind::InvalidDifferential,
                        e2.format(a.source) + " is not a cycle on E_" + std::to_string(page.r()));
        Gen g{*sb, a.source, {}, sb->total() % 2 != 0};
        if (auto tb = e2.bidegree(a.target)) {
            if (*tb != *sb + shift())
                throw Error(ErrorKind::InvalidDifferential, "d_" + std::to_string(r_) + "(" + e2.format(a.source) +
                                                                ") must have bidegree " + show(*sb + shift()));
            if (!page.classify(*tb, a.target))
                throw Error(ErrorKind::InvalidDifferential, e2.format(a.target) + " is not a cycle on E_" +
                                                                std::to_string(page.r()));
            g.value = a.target;
        }
        gens.push_back(std::move(g));
    }

    if (page.r() == 2)
        check_presentation_relations(e2, spec);

    auto words = WordBuilder(page, gens, shift(), max_total_, strict_total_).build();

    for (const auto& b : e2.cells()) {
        if (b.total() > max_total_)
            continue;
        const int dim_src = page.dim(b);
        const Bidegree t = b + shift();
        const int dim_tgt = w.contains(t) ? page.dim(t) : 0;
        auto it = words.find(b);
        const std::vector<Word> none;
        const auto& ws = it == words.end() ? none : it->second;

        Matrix g(static_cast<std::size_t>(dim_src), ws.size());
        Matrix vals(static_cast<std::size_t>(dim_tgt), ws.size());
        for (std::size_t j = 0; j < ws.size(); ++j) {
            for (int i = 0; i < dim_src; ++i)
                g(static_cast<std::size_t>(i), j) = ws[j].product[static_cast<std::size_t>(i)];
            for (int i = 0; i < dim_tgt; ++i)
                vals(static_cast<std::size_t>(i), j) = ws[j].value[static_cast<std::size_t>(i)];
        }

        const bool strict = b.total() <= strict_total_;
        Matrix m(static_cast<std::size_t>(dim_tgt), static_cast<std::size_t>(dim_src));
        for (int i = 0; i < dim_src; ++i) {
            Vec unit(static_cast<std::size_t>(dim_src), 0);
            unit[static_cast<std::size_t>(i)] = 1;
            auto lambda = ws.empty() ? std::nullopt : solve(field_, g, unit);
            if (!lambda && !strict)
                continue;
            if (!lambda)
                throw Error(ErrorKind::UnassignedGenerator,
                            "class " + e2.format(page.representative(b, static_cast<std::size_t>(i))) + " at " +
                                show(b) + " is not a product of assigned classes on E_" + std::to_string(page.r()));
            const Vec col = orbitcoh::apply(field_, vals, *lambda);
            for (int k = 0; k < dim_tgt; ++k)
                m(static_cast<std::size_t>(k), static_cast<std::size_t>(i)) = col[static_cast<std::size_t>(k)];
        }

        // the extension is well defined iff m g = vals
        const Matrix check = multiply(field_, m, g);
        if (strict && !(check == vals)) {
            std::size_t bad = 0;
            while (bad < ws.size() && check.column(bad) == vals.column(bad))
                ++bad;
            throw Error(ErrorKind::IncompatibleDifferential,
                        "Leibniz values disagree at " + show(b) + " on d_" + std::to_string(r_) + "(" +
                            describe_word(gens, e2, ws[bad].exponents) + ")");
        }
        ranks_[b] = orbitcoh::rank(field_, m);
        matrices_.emplace(b, std::move(m));
    }

    for (const auto& [b, m] : matrices_) {
        auto it = matrices_.find(b + shift());
        if (b.total() > strict_total_ || it == matrices_.end() || m.rows() == 0 || it->second.rows() == 0 || m.cols() == 0)
            continue;
        if (!multiply(field_, it->second, m).is_zero())
            throw Error(ErrorKind::DifferentialNotSquareZero, "d_" + std::to_string(r_) + " d_" +
                                                                  std::to_string(r_) + " != 0 starting at " + show(b));
    }
}

int PageDifferential::dim(Bidegree b) const
{
    auto it = dims_.find(b);
    return it == dims_.end() ? 0 : it->second;
}

bool PageDifferential::covers(Bidegree b) const
{
    return b.total() <= max_total_;
}

Matrix PageDifferential::matrix(Bidegree b) const
{
    if (auto it = matrices_.find(b); it != matrices_.end())
        return it->second;
    const Bidegree t = b + shift();
    const auto rows = static_cast<std::size_t>(window_.contains(t) ? dim(t) : 0);
    if (dim(b) == 0)
        return Matrix(rows, 0);
    throw Error(ErrorKind::InvalidParams, "d_" + std::to_string(r_) + " not computed at " + show(b));
}

Vec PageDifferential::apply(Bidegree b, const Vec& coords) const
{
    return orbitcoh::apply(field_, matrix(b), coords);
}

std::size_t PageDifferential::rank(Bidegree b) const
{
    auto it = ranks_.find(b);
    return it == ranks_.end() ? 0 : it->second;
}

std::vector<Bidegree> PageDifferential::sources() const
{
    std::vector<Bidegree> out;
    for (const auto& [b, _] : matrices_)
        out.push_back(b);
    return out;
}

Vec PageDifferential::leibniz_rhs(const BigradedPage& page, Bidegree bu, const Vec& u, Bidegree bv,
                                  const Vec& v) const
{
    const Bidegree target = bu + bv + shift();
    Vec out(static_cast<std::size_t>(page.dim(target)), 0);
    const Window w = page.window();
    if (!w.contains(target))
        return out;
    if (w.contains(bu + shift())) {
        const Vec first = page.multiply(bu + shift(), apply(bu, u), bv, v);
        axpy(field_, 1, first, out);
    }
    if (w.contains(bv + shift())) {
        const Vec second = page.multiply(bu, u, bv + shift(), apply(bv, v));
        axpy(field_, field_.sign(bu.total()), second, out);
    }
    return out;
}

BigradedPage turn_page(const BigradedPage& page, const PageDifferential& d)
{
    const Window w = page.window();
    if (d.r() != page.r())
        throw Error(ErrorKind::InvalidDifferential, "differential does not belong to this page");
    if (d.max_total() < w.k_max + w.l_max)
        throw Error(ErrorKind::InvalidParams, "turning a page needs the differential on the whole window");
    const auto& f = page.algebra().field();
    BigradedPage next;
    next.algebra_ = page.algebra_;
    next.r_ = page.r_ + 1;
    for (const auto& [b, cell] : page.cells_) {
        const std::size_t dim = cell.classes.rank();
        const Matrix out = d.matrix(b);
        std::vector<Vec> ker;
        if (out.rows() == 0) {
            for (std::size_t i = 0; i < dim; ++i) {
                Vec e(dim, 0);
                e[i] = 1;
                ker.push_back(std::move(e));
            }
        } else {
            ker = kernel(f, out);
        }
        auto lift = [&](const Vec& coords) {
            Vec ambient(page.algebra().cell_basis(b).size(), 0);
            for (std::size_t i = 0; i < coords.size(); ++i)
                axpy(f, coords[i], cell.classes.rows[i], ambient);
            return ambient;
        };

        std::vector<Vec> bnd = cell.boundaries.rows;
        const Bidegree src = b - d.shift();
        if (w.contains(src)) {
            const Matrix in = d.matrix(src);
            for (std::size_t j = 0; j < in.cols(); ++j)
                bnd.push_back(lift(in.column(j)));
        }
        Echelon new_bnd = echelon(f, std::move(bnd));

        std::vector<Vec> cls;
        for (const auto& k : ker) {
            Vec v = lift(k);
            reduce_against(f, new_bnd, v);
            if (!is_zero(v))
                cls.push_back(std::move(v));
        }
        next.cells_[b] = BigradedPage::Cell{std::move(new_bnd), echelon(f, std::move(cls))};
    }
    return next;
}

// ---------------------------------------------------------------------------
// Running to E_infinity

std::string_view to_string(PageMode mode)
{
    switch (mode) {
    case PageMode::Specified: return "specified";
    case PageMode::ForcedBySupport: return "forced-by-support";
    case PageMode::ForcedByGenerators: return "forced-by-generators";
    case PageMode::AssumedZero: return "assumed-zero";
    case PageMode::Final: return "final";
    }
    return "unknown";
}

bool forced_by_support(const BigradedPage& page, int r, int target)
{
    const Bidegree shift{r, 1 - r};
    for (const auto& b : page.support())
        if (b.total() <= target && page.dim(b + shift) > 0)
            return false;
    return true;
}

bool forced_by_generators(const BigradedPage& page, int r, int target, const std::vector<Element>& sources)
{
    const SerreE2& e2 = page.algebra();
    const auto& f = e2.field();
    const int region = target + 1;
    const Bidegree shift{r, 1 - r};

    std::vector<std::pair<Bidegree, Element>> gens;
    for (const auto& s : sources) {
        auto b = e2.bidegree(s);
        if (!b || *b == Bidegree{} || b->total() > region)
            continue;
        auto cls = page.classify(*b, s);
        if (!cls || is_zero(*cls))
            continue;
        if (std::none_of(gens.begin(), gens.end(), [&](const auto& g) { return g.second == s; }))
            gens.emplace_back(*b, s);
    }

    DifferentialSpec spec{r, {}};
    for (const auto& [b, s] : gens)
        spec.assignments.push_back({s, {}});
    try {
        PageDifferential zero(page, spec, region);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::UnassignedGenerator)
            return false;
        throw;
    }

    // every choice of values in the target cells
    std::vector<int> target_dims;
    long combos = 1;
    for (const auto& [b, s] : gens) {
        const int td = page.window().contains(b + shift) ? page.dim(b + shift) : 0;
        target_dims.push_back(td);
        for (int i = 0; i < td; ++i) {
            combos *= f.p();
            if (combos > 4096)
                return false;
        }
    }
    for (long code = 1; code < combos; ++code) {
        long rest = code;
        DifferentialSpec trial{r, {}};
        for (std::size_t g = 0; g < gens.size(); ++g) {
            Vec coords(static_cast<std::size_t>(target_dims[g]), 0);
            for (auto& c : coords) {
                c = static_cast<Coeff>(rest % f.p());
                rest /= f.p();
            }
            const Bidegree tb = gens[g].first + shift;
            trial.assignments.push_back({gens[g].second, coords.empty() ? Element{} : page.lift(tb, coords)});
        }
        try {
            PageDifferential candidate(page, trial, region);
            return false;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::IncompatibleDifferential && e.kind() != ErrorKind::DifferentialNotSquareZero)
                throw;
        }
    }
    return true;
}

namespace {

std::map<Bidegree, int> snapshot(const BigradedPage& page, int max_total)
{
    std::map<Bidegree, int> dims;
    for (const auto& b : page.support())
        if (b.total() <= max_total)
            dims[b] = page.dim(b);
    return dims;
}

} // namespace

int last_page(Window window, const std::vector<DifferentialSpec>& specs)
{
    int r = window.l_max + 1;
    for (const auto& s : specs)
        r = std::max(r, s.r);
    return r;
}

int safe_total(int target, int last_page, int r)
{
    return target + 1 + (last_page - r);
}

RunResult run(const BigradedPage& e2, std::vector<DifferentialSpec> specs, int target)
{
    const Window w = e2.window();
    if (e2.r() != 2)
        throw Error(ErrorKind::InvalidParams, "run starts from E_2");
    if (target < 0)
        throw Error(ErrorKind::InvalidParams, "negative target degree");
    if (target > w.k_max + w.l_max)
        throw Error(ErrorKind::WindowTooSmall, "target degree beyond the window");
    std::sort(specs.begin(), specs.end(), [](const auto& a, const auto& b) { return a.r < b.r; });
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (specs[i].r < 2)
            throw Error(ErrorKind::InvalidDifferential, "page index must be at least 2");
        if (i > 0 && specs[i].r == specs[i - 1].r)
            throw Error(ErrorKind::InvalidDifferential, "two specs for d_" + std::to_string(specs[i].r));
    }
    std::vector<Element> sources;
    for (const auto& s : specs)
        for (const auto& a : s.assignments)
            sources.push_back(a.source);

    const int r_end = last_page(w, specs);
    RunResult result{e2, {}, 2, {}, target, {}};
    BigradedPage page = e2;
    std::vector<PageRecord> records;
    int last_nonzero = 1;
    auto spec_it = specs.begin();
    for (int r = 2; r <= r_end; ++r) {
        PageRecord rec{r, PageMode::Specified, snapshot(page, target + 1), {}};
        if (spec_it != specs.end() && spec_it->r == r) {
            PageDifferential d(page, *spec_it, std::nullopt, safe_total(target, r_end, r));
            for (const auto& b : d.sources())
                if (d.rank(b) > 0) {
                    rec.differentials.push_back({b, b + d.shift(), d.rank(b)});
                    last_nonzero = r;
                }
            page = turn_page(page, d);
            ++spec_it;
        } else {
            if (forced_by_support(page, r, target))
                rec.mode = PageMode::ForcedBySupport;
            else if (forced_by_generators(page, r, target, sources))
                rec.mode = PageMode::ForcedByGenerators;
            else {
                rec.mode = PageMode::AssumedZero;
                result.assumed_zero_pages.push_back(r);
            }
            page = page.advanced();
        }
        records.push_back(std::move(rec));
    }
    result.collapse_page = last_nonzero + 1;
    for (auto& rec : records)
        if (rec.r < result.collapse_page)
            result.pages.push_back(std::move(rec));
    result.pages.push_back(PageRecord{result.collapse_page, PageMode::Final, snapshot(page, target + 1), {}});
    result.total_dims = total_dims(page, target);
    result.e_inf = std::move(page);
    return result;
}

std::vector<int> total_dims(const BigradedPage& page, int max_total_degree)
{
    const Window w = page.window();
    if (max_total_degree > w.k_max + w.l_max)
        throw Error(ErrorKind::WindowTooSmall, "total degree " + std::to_string(max_total_degree) +
                                                   " beyond the window");
    std::vector<int> dims;
    for (int j = 0; j <= max_total_degree; ++j)
        dims.push_back(page.total_dim(j));
    return dims;
}

std::vector<int> edge_base_dims(const BigradedPage& page)
{
    std::vector<int> dims;
    for (int k = 0; k <= page.window().k_max; ++k)
        dims.push_back(page.dim({k, 0}));
    return dims;
}

std::vector<int> edge_fiber_dims(const BigradedPage& page)
{
    std::vector<int> dims;
    for (int l = 0; l <= page.window().l_max; ++l)
        dims.push_back(page.dim({0, l}));
    return dims;
}

// ---------------------------------------------------------------------------
// Comparing with a candidate algebra

namespace {

using TotClass = std::map<Bidegree, Vec>;

std::string list(const std::vector<int>& v)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

} // namespace

std::vector<Check> match_presentation(const BigradedPage& e_inf, const RingPresentation& candidate,
                                      const std::map<std::string, Element>& images, int target)
{
    std::vector<Check> checks;
    const SerreE2& e2 = e_inf.algebra();
    const auto& alg = e2.algebra();
    const auto& f = e2.field();

    {
        Check c{"additive dimensions match", false, ""};
        if (candidate.truncation() < target) {
            c.detail = "candidate truncated below target degree " + std::to_string(target);
        } else {
            auto cand = poincare_polynomial(candidate);
            cand.resize(static_cast<std::size_t>(target) + 1);
            const auto engine = total_dims(e_inf, target);
            c.pass = cand == engine;
            c.detail = "candidate " + list(cand) + " vs E_inf " + list(engine);
            if (!c.pass)
                for (std::size_t j = 0; j < cand.size(); ++j)
                    if (cand[j] != engine[j]) {
                        c.detail += "; first mismatch at degree " + std::to_string(j);
                        break;
                    }
        }
        checks.push_back(std::move(c));
    }

    // generator images; a generator that vanishes in the candidate must map to zero
    std::vector<std::optional<std::pair<Bidegree, Element>>> gen_images;
    bool gens_ok = true;
    for (std::size_t gi = 0; gi < candidate.num_generators(); ++gi) {
        const auto& g = candidate.generators()[gi];
        const bool vanishes = g.degree > candidate.truncation() ||
                              candidate.normal_form(candidate.generator_monomial(gi)).is_zero();
        Check c{"generator " + g.name + (vanishes ? " vanishes and so does its image"
                                                  : " is a nonzero permanent cycle of degree " +
                                                        std::to_string(g.degree)),
                false, ""};
        gen_images.emplace_back();
        auto it = images.find(g.name);
        std::optional<Bidegree> b;
        if (it != images.end())
            b = e2.bidegree(it->second);
        if (it == images.end()) {
            c.detail = "no image given";
        } else if (!b) {
            c.pass = vanishes;
            c.detail = "image is zero";
        } else if (b->total() != g.degree) {
            c.detail = "image has total degree " + std::to_string(b->total());
        } else if (auto cls = e_inf.classify(*b, it->second); !cls) {
            c.detail = e2.format(it->second) + " does not survive";
        } else {
            c.pass = is_zero(*cls) == vanishes;
            c.detail = "[" + e2.format(it->second) + "] at (" + std::to_string(b->k) + "," + std::to_string(b->l) +
                       ")" + (is_zero(*cls) ? " is zero in E_inf" : "");
            if (!is_zero(*cls))
                gen_images.back() = std::pair{*b, it->second};
        }
        gens_ok = gens_ok && c.pass;
        checks.push_back(std::move(c));
    }
    if (!gens_ok)
        return checks;

    auto image_of = [&](const Monomial& m) -> std::optional<TotClass> {
        Bidegree b{};
        Element prod = alg.one();
        for (std::size_t i = 0; i < m.exponents.size(); ++i)
            for (int e = 0; e < m.exponents[i]; ++e) {
                if (!gen_images[i])
                    return TotClass{};
                b = b + gen_images[i]->first;
                if (!e_inf.window().contains(b))
                    return TotClass{};
                prod = alg.multiply(prod, gen_images[i]->second);
            }
        auto cls = e_inf.classify(b, prod);
        if (!cls)
            return std::nullopt;
        TotClass out;
        if (!is_zero(*cls))
            out[b] = *cls;
        return out;
    };
    auto add_into = [&](TotClass& acc, const TotClass& x, Coeff c) {
        for (const auto& [b, v] : x) {
            auto& slot = acc[b];
            if (slot.empty())
                slot.assign(v.size(), 0);
            axpy(f, c, v, slot);
            if (is_zero(slot))
                acc.erase(b);
        }
    };

    for (const auto& rel : candidate.relations()) {
        if (candidate.degree(rel.lead) > target)
            continue;
        Element rel_rhs;
        for (const auto& t : rel.rhs)
            rel_rhs.add_term(candidate.field(), t.monomial, t.coeff);
        Check c{"relation " + candidate.format(rel.lead) + " = " + candidate.format(rel_rhs) + " holds in Tot E_inf",
                false, ""};
        auto lhs = image_of(rel.lead);
        TotClass diff;
        bool ok = lhs.has_value();
        if (ok)
            add_into(diff, *lhs, 1);
        for (const auto& t : rel.rhs) {
            auto x = image_of(t.monomial);
            ok = ok && x.has_value();
            if (x)
                add_into(diff, *x, f.neg(t.coeff));
        }
        c.pass = ok && diff.empty();
        if (!ok)
            c.detail = "a product is not a permanent cycle";
        else if (!diff.empty())
            c.detail = "difference nonzero at (" + std::to_string(diff.begin()->first.k) + "," +
                       std::to_string(diff.begin()->first.l) + ")";
        checks.push_back(std::move(c));
    }

    {
        Check c{"generators induce an isomorphism onto Tot E_inf in degrees 0.." + std::to_string(target), true, ""};
        std::vector<int> bad;
        for (int j = 0; j <= std::min(target, candidate.truncation()); ++j) {
            std::vector<Bidegree> cells;
            for (const auto& b : e_inf.support())
                if (b.total() == j)
                    cells.push_back(b);
            std::vector<Vec> rows;
            bool ok = true;
            for (const auto& m : candidate.basis(j)) {
                auto img = image_of(m);
                if (!img) {
                    ok = false;
                    break;
                }
                Vec row;
                for (const auto& b : cells) {
                    auto it = img->find(b);
                    const Vec part = it == img->end() ? Vec(static_cast<std::size_t>(e_inf.dim(b)), 0) : it->second;
                    row.insert(row.end(), part.begin(), part.end());
                }
                rows.push_back(std::move(row));
            }
            const auto dim = static_cast<std::size_t>(e_inf.total_dim(j));
            if (!ok || rows.size() != dim || (dim > 0 && row_reduce(f, rows).rank() != dim))
                bad.push_back(j);
        }
        c.pass = bad.empty();
        if (!bad.empty())
            c.detail = "fails in degrees " + list(bad);
        checks.push_back(std::move(c));
    }
    return checks;
}

} // namespace orbitcoh
