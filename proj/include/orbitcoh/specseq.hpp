#pragma once

#include "orbitcoh/linalg.hpp"
#include "orbitcoh/presentation.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace orbitcoh {

/// (k, l) = (base degree, fiber degree).
struct Bidegree {
    int k = 0;
    int l = 0;

    int total() const noexcept { return k + l; }
    Bidegree operator+(Bidegree o) const noexcept { return {k + o.k, l + o.l}; }
    Bidegree operator-(Bidegree o) const noexcept { return {k - o.k, l - o.l}; }
    auto operator<=>(const Bidegree&) const = default;
};

struct Window {
    int k_max = 0;
    int l_max = 0;

    bool contains(Bidegree b) const noexcept { return b.k >= 0 && b.l >= 0 && b.k <= k_max && b.l <= l_max; }
    /// Every differential leaving total degree <= target stays inside.
    bool guards(int p, int target) const noexcept { return k_max >= 2 * (p + target); }
};

/// k_max = 2 (target + 2p), l_max = top fiber degree.
Window default_window(int p, int fiber_top, int target);

/// H*(base) (x) H*(fiber) as one presentation whose first generators come from
/// the base. The base must be concentrated in even degrees and both factors
/// must vanish outside the window.
class SerreE2 {
public:
    static std::shared_ptr<const SerreE2> build(const RingPresentation& base, const RingPresentation& fiber,
                                                Window window);

    const RingPresentation& algebra() const noexcept { return algebra_; }
    const PrimeField& field() const noexcept { return algebra_.field(); }
    Window window() const noexcept { return window_; }
    std::size_t num_base_generators() const noexcept { return n_base_; }

    Bidegree bidegree(const Monomial& m) const;
    /// nullopt for zero; throws on mixed bidegrees.
    std::optional<Bidegree> bidegree(const Element& e) const;

    /// E_2 monomials of bidegree b in ascending order; empty outside the window.
    const std::vector<Monomial>& cell_basis(Bidegree b) const;
    std::vector<Bidegree> cells() const;

    Vec to_cell(Bidegree b, const Element& e) const;
    Element from_cell(Bidegree b, const Vec& v) const;

    Element parse(std::string_view text) const { return algebra_.parse(text); }
    std::string format(const Element& e) const { return algebra_.format(e); }

private:
    SerreE2(RingPresentation algebra, std::size_t n_base, Window window);

    RingPresentation algebra_;
    std::size_t n_base_;
    Window window_;
    std::map<Bidegree, std::vector<Monomial>> cells_;
    std::map<Bidegree, std::map<Monomial, std::size_t>> index_;
};

/// E_2 representatives of a class and of its image under d_r.
struct Assignment {
    Element source;
    Element target;
};

/// Values of d_r on a generating set; everything else follows from the
/// Leibniz rule.
struct DifferentialSpec {
    int r = 2;
    std::vector<Assignment> assignments;
};

/// Convenience: parses (source, target) pairs in the E_2 algebra.
DifferentialSpec make_spec(const SerreE2& e2, int r,
                           const std::vector<std::pair<std::string, std::string>>& values);

class PageDifferential;

/// E_r on the window. Each cell is a subquotient Z_r / B_r of the E_2 cell,
/// stored in E_2 coordinates: an echelon basis of the boundaries and an
/// echelon basis of representatives for the classes. Pivots are the largest
/// monomials, so each representative is reduced against the boundaries.
class BigradedPage {
public:
    static BigradedPage e2(std::shared_ptr<const SerreE2> algebra);

    int r() const noexcept { return r_; }
    const SerreE2& algebra() const noexcept { return *algebra_; }
    std::shared_ptr<const SerreE2> algebra_ptr() const noexcept { return algebra_; }
    Window window() const noexcept { return algebra_->window(); }

    int dim(Bidegree b) const;
    /// Nonzero cells, (k, l) ascending.
    std::vector<Bidegree> support() const;
    int total_dim(int degree) const;

    Element representative(Bidegree b, std::size_t i) const;
    Element lift(Bidegree b, const Vec& coords) const;
    /// Coordinates of the class of a cycle; nullopt when e is not a cycle on
    /// this page (not in Z_r).
    std::optional<Vec> classify(Bidegree b, const Element& e) const;
    std::optional<Vec> classify_vector(Bidegree b, Vec ambient) const;
    /// Product of classes via representatives.
    Vec multiply(Bidegree bu, const Vec& u, Bidegree bv, const Vec& v) const;

    /// The next page when d_r vanishes identically.
    BigradedPage advanced() const;

private:
    friend BigradedPage turn_page(const BigradedPage& page, const PageDifferential& d);

    struct Cell {
        Echelon boundaries;
        Echelon classes;
    };
    const Cell* cell(Bidegree b) const;

    std::shared_ptr<const SerreE2> algebra_;
    int r_ = 2;
    std::map<Bidegree, Cell> cells_;
};

/// d_r on a page, extended from a DifferentialSpec by the Leibniz rule.
/// Construction enumerates every product of generating classes in the region,
/// checks that the classes are generated, that the extension is well defined
/// on every relation among the products, and that d_r d_r = 0. On page 2 the
/// relations of the E_2 presentation are checked as well.
class PageDifferential {
public:
    /// Above strict_total (default: max_total) classes that are not generated
    /// get the zero value and inconsistencies are not reported; this absorbs
    /// the spurious classes at the window edge.
    PageDifferential(const BigradedPage& page, const DifferentialSpec& spec,
                     std::optional<int> max_total = std::nullopt, std::optional<int> strict_total = std::nullopt);

    int r() const noexcept { return r_; }
    Bidegree shift() const noexcept { return {r_, 1 - r_}; }
    /// Largest source total degree covered.
    int max_total() const noexcept { return max_total_; }
    int strict_total() const noexcept { return strict_total_; }

    /// Matrix of d_r from cell b (columns) to cell b + shift (rows).
    Matrix matrix(Bidegree b) const;
    bool covers(Bidegree b) const;
    Vec apply(Bidegree b, const Vec& coords) const;
    std::size_t rank(Bidegree b) const;
    std::vector<Bidegree> sources() const;

    /// d(u) v + (-1)^{|u|} u d(v), computed from the values on u and v.
    Vec leibniz_rhs(const BigradedPage& page, Bidegree bu, const Vec& u, Bidegree bv, const Vec& v) const;

private:
    int dim(Bidegree b) const;

    int r_;
    int max_total_;
    int strict_total_;
    PrimeField field_;
    Window window_;
    std::map<Bidegree, int> dims_;
    std::map<Bidegree, Matrix> matrices_;
    std::map<Bidegree, std::size_t> ranks_;
};

/// E_{r+1} = H(E_r, d_r).
BigradedPage turn_page(const BigradedPage& page, const PageDifferential& d);

enum class PageMode {
    Specified,            // d_r given by a spec
    ForcedBySupport,      // no bidegree pair with both ends nonzero
    ForcedByGenerators,   // every consistent Leibniz extension is zero
    AssumedZero,          // not determined by the engine, taken as zero
    Final,                // E_infinity
};

std::string_view to_string(PageMode mode);

struct DifferentialRecord {
    Bidegree from;
    Bidegree to;
    std::size_t rank = 0;
};

struct PageRecord {
    int r = 2;
    PageMode mode = PageMode::Specified;
    std::map<Bidegree, int> dims;
    std::vector<DifferentialRecord> differentials;
};

struct RunResult {
    BigradedPage e_inf;
    std::vector<PageRecord> pages;
    int collapse_page = 2;
    std::vector<int> assumed_zero_pages;
    int target = 0;
    std::vector<int> total_dims;
};

/// Last page run() turns: max(l_max + 1, largest specified r).
int last_page(Window window, const std::vector<DifferentialSpec>& specs);
/// Largest total degree at which run() computes d_r exactly on page r; above it
/// lie the spurious classes of the window edge. Cells of total degree <= target
/// on every later page only depend on this region.
int safe_total(int target, int last_page, int r);

/// Turns pages until no differential can be nonzero in the window. Pages
/// without a spec get the zero differential; the transcript records whether
/// that was forced by bidegree support, forced multiplicatively, or assumed.
RunResult run(const BigradedPage& e2, std::vector<DifferentialSpec> specs, int target);

/// Entry j = sum over k + l = j of dim E^{k,l}, j = 0..max_total_degree.
std::vector<int> total_dims(const BigradedPage& page, int max_total_degree);

/// Bottom row: dim E^{k,0} for k = 0..k_max (image of the base).
std::vector<int> edge_base_dims(const BigradedPage& page);
/// Left column: dim E^{0,l} for l = 0..l_max (image in the fiber).
std::vector<int> edge_fiber_dims(const BigradedPage& page);

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Compares Tot E_inf with a candidate algebra whose generators are sent to
/// the given E_2 representatives: additive dimensions, permanence of the
/// generator classes, every candidate relation evaluated in Tot E_inf, and
/// bijectivity of the induced map degree by degree.
std::vector<Check> match_presentation(const BigradedPage& e_inf, const RingPresentation& candidate,
                                      const std::map<std::string, Element>& images, int target);

/// Whether d_r vanishes on the page for sources of total degree <= target
/// when every generating class has nowhere to go or every nonzero choice
/// of values is inconsistent.
bool forced_by_generators(const BigradedPage& page, int r, int target, const std::vector<Element>& sources);
bool forced_by_support(const BigradedPage& page, int r, int target);

} // namespace orbitcoh
