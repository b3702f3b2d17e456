#pragma once

#include "orbitcoh/presentation.hpp"

#include <json.hpp>

#include <string>

namespace orbitcoh {

using json = nlohmann::json;

/// Canonical presentation object:
/// {p, generators:[{name,degree}], relations:[{lead, rhs:[{coeff, monomial}]}],
///  truncation, metadata}, monomials as exponent lists in generator order.
json to_json(const RingPresentation& pres);
RingPresentation presentation_from_json(const json& j);

json to_json(const RingPresentation& pres, const Monomial& m);

/// e.g. \wedge(a)\otimes\mathbb{Z}_{3}[b]/\langle b^{3}\rangle
std::string to_latex(const RingPresentation& pres);
std::string to_text(const RingPresentation& pres);

} // namespace orbitcoh
