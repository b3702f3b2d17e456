#pragma once

#include "orbitcoh/field.hpp"
#include "orbitcoh/linalg.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orbitcoh {

struct Generator {
    std::string name;
    int degree = 0;

    bool odd() const noexcept { return degree % 2 != 0; }
};

/// Exponent vector indexed by generator position. The defaulted ordering is
/// only a storage order; the degree-lex order is RingPresentation::compare.
struct Monomial {
    std::vector<int> exponents;

    auto operator<=>(const Monomial&) const = default;
};

struct Term {
    Coeff coeff = 0;
    Monomial monomial;
};

/// Rewrite rule lead -> sum of rhs terms. Every rhs monomial must be strictly
/// smaller than the lead in the presentation's monomial order.
struct Relation {
    Monomial lead;
    std::vector<Term> rhs;
};

/// A linear combination of normal-form monomials. Zero coefficients are never
/// stored, so the empty element is zero.
class Element {
public:
    Element() = default;

    const std::map<Monomial, Coeff>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    Coeff coefficient(const Monomial& m) const;

    void add_term(const PrimeField& f, const Monomial& m, Coeff c);

    bool operator==(const Element&) const = default;

private:
    std::map<Monomial, Coeff> terms_;
};

using Metadata = std::map<std::string, std::string>;

/// A finitely presented graded-commutative algebra over Z_p, valid up to a
/// truncation degree. For odd p, odd generators square to zero implicitly;
/// for p = 2 every square must come from an explicit relation.
///
/// Construction validates the relations (homogeneity, strictly decreasing
/// rewrites) and checks exhaustively that rewriting is confluent on every
/// monomial up to the truncation, so normal forms are canonical. Instances
/// are immutable and safe to share across threads.
class RingPresentation {
public:
    static RingPresentation build(PrimeField field, std::vector<Generator> generators,
                                  std::vector<Relation> relations, int truncation, Metadata metadata = {});

    const PrimeField& field() const noexcept { return field_; }
    const std::vector<Generator>& generators() const noexcept { return generators_; }
    const std::vector<Relation>& relations() const noexcept { return relations_; }
    int truncation() const noexcept { return truncation_; }
    const Metadata& metadata() const noexcept { return metadata_; }

    std::size_t num_generators() const noexcept { return generators_.size(); }
    std::optional<std::size_t> generator_index(std::string_view name) const;
    Monomial unit() const { return Monomial{std::vector<int>(generators_.size(), 0)}; }
    Monomial generator_monomial(std::size_t i, int exponent = 1) const;

    int degree(const Monomial& m) const;
    /// Degree of a homogeneous element; nullopt for zero. Throws
    /// NonHomogeneousRelation on mixed degrees.
    std::optional<int> degree(const Element& e) const;
    bool admissible(const Monomial& m) const;
    bool is_normal(const Monomial& m) const;
    /// Degree first, then lexicographic on exponent vectors with the first
    /// generator most significant.
    std::strong_ordering compare(const Monomial& a, const Monomial& b) const;

    /// Normal-form monomials of the given degree, ascending.
    const std::vector<Monomial>& basis(int degree) const;
    std::optional<std::size_t> basis_index(const Monomial& m) const;

    Element normal_form(const Monomial& m, Coeff c = 1) const;
    /// u*v as ordered product, including the graded-commutativity sign.
    Element monomial_product(const Monomial& u, const Monomial& v) const;
    Element multiply(const Element& u, const Element& v) const;
    Element add(const Element& u, const Element& v) const;
    Element scale(Coeff c, const Element& u) const;
    Element power(const Element& u, int e) const;
    Element one() const { return normal_form(unit()); }

    Vec to_vector(const Element& e, int degree) const;
    Element from_vector(int degree, const Vec& v) const;

    /// Parses sums of products such as "2*t*a*b^2 - t^3" or "0".
    Element parse(std::string_view text) const;
    std::string format(const Monomial& m) const;
    std::string format(const Element& e) const;

    /// Parity of the sign picked up when u*v is rewritten as the sorted
    /// monomial u+v.
    int product_sign(const Monomial& u, const Monomial& v) const;

private:
    RingPresentation(PrimeField field) : field_(field) {}

    Element reduce(const Monomial& m, Coeff c, const Relation* first) const;
    const Relation* first_divisor(const Monomial& m) const;
    void check_confluence() const;

    PrimeField field_;
    std::vector<Generator> generators_;
    std::vector<Relation> relations_;
    int truncation_ = 0;
    Metadata metadata_;
    std::vector<std::vector<Monomial>> bases_;
    std::vector<std::map<Monomial, std::size_t>> index_;
};

/// Every admissible monomial of the given degree, reducible or not.
std::vector<Monomial> enumerate_monomials(const std::vector<Generator>& gens, bool odd_squares_vanish, int degree);

/// Entry d is the dimension in degree d, for d = 0..truncation.
std::vector<int> poincare_polynomial(const RingPresentation& pres);

/// Matrix of u -> alpha*u from degree `source_degree` to source_degree+|alpha|.
/// A zero alpha has no intrinsic degree, so it must be supplied.
Matrix cup_map(const RingPresentation& pres, const Element& alpha, int source_degree,
               std::optional<int> alpha_degree = std::nullopt);

} // namespace orbitcoh
