#pragma once

#include "orbitcoh/presentation.hpp"
#include "orbitcoh/serialize.hpp"

#include <optional>
#include <vector>

namespace orbitcoh {

/// A degree-2 class (possibly zero) in a candidate orbit-space ring.
class CharacteristicClass {
public:
    /// Throws WrongDegreeAlpha unless value is zero or homogeneous of degree 2.
    CharacteristicClass(const RingPresentation& home, Element value);
    static CharacteristicClass parse(const RingPresentation& home, std::string_view text);

    const RingPresentation& home() const noexcept { return *home_; }
    const Element& value() const noexcept { return value_; }
    bool is_zero() const noexcept { return value_.is_zero(); }
    static constexpr int degree = 2;

private:
    const RingPresentation* home_;
    Element value_;
};

/// Betti numbers of the circle bundle over `base` with class alpha, degrees
/// 0..top_degree: dims[i] = coker(alpha: H^{i-2} -> H^i) + ker(alpha: H^{i-1} -> H^{i+1}).
std::vector<int> pushforward_dims(const RingPresentation& base, const CharacteristicClass& alpha, int top_degree);

struct VanishingReport {
    bool pass = false;
    std::optional<int> first_violation;  // first degree >= n with H^i != 0
    bool iso_above = false;              // alpha: H^i -> H^{i+2} bijective for n <= i <= truncation - 2
    std::optional<int> nilpotency;       // least k with alpha^k = 0, if reached
    std::string detail;
};

VanishingReport verify_vanishing(int n, const RingPresentation& base, const CharacteristicClass& alpha);

/// Largest k with alpha^k != 0; nullopt when alpha = 0. Throws DegreeOverflow
/// if alpha^k is still nonzero when alpha^{k+1} leaves the truncation.
std::optional<int> mod_p_index(const RingPresentation& base, const CharacteristicClass& alpha);

/// {alpha, index, predictions, vanishing:{pass, first_violation, iso_above, nilpotency}}
json gysin_report(const RingPresentation& base, const CharacteristicClass& alpha, int top_degree, int n);

} // namespace orbitcoh
