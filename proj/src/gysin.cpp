#include "orbitcoh/gysin.hpp"

#include "orbitcoh/error.hpp"

namespace orbitcoh {

CharacteristicClass::CharacteristicClass(const RingPresentation& home, Element value)
    : home_(&home), value_(std::move(value))
{
    auto d = home.degree(value_);
    if (d && *d != degree)
        throw Error(ErrorKind::WrongDegreeAlpha, "characteristic class " + home.format(value_) + " has degree " +
                                                     std::to_string(*d) + ", expected 2");
}

CharacteristicClass CharacteristicClass::parse(const RingPresentation& home, std::string_view text)
{
    return CharacteristicClass(home, home.parse(text));
}

namespace {

int dim(const RingPresentation& base, int d)
{
    if (d < 0 || d > base.truncation())
        return 0;
    return static_cast<int>(base.basis(d).size());
}

int cup_rank(const RingPresentation& base, const CharacteristicClass& alpha, int source)
{
    if (source < 0 || alpha.is_zero())
        return 0;
    return static_cast<int>(rank(base.field(), cup_map(base, alpha.value(), source, CharacteristicClass::degree)));
}

} // namespace

std::vector<int> pushforward_dims(const RingPresentation& base, const CharacteristicClass& alpha, int top_degree)
{
    if (top_degree < 0)
        throw Error(ErrorKind::InvalidParams, "negative top degree");
    if (top_degree + 2 > base.truncation())
        throw Error(ErrorKind::DegreeOverflow, "top degree " + std::to_string(top_degree) +
                                                   " needs truncation at least " + std::to_string(top_degree + 2));
    std::vector<int> dims;
    for (int i = 0; i <= top_degree; ++i) {
        const int coker = dim(base, i) - cup_rank(base, alpha, i - 2);
        const int ker = dim(base, i - 1) - cup_rank(base, alpha, i - 1);
        dims.push_back(coker + ker);
    }
    return dims;
}

VanishingReport verify_vanishing(int n, const RingPresentation& base, const CharacteristicClass& alpha)
{
    VanishingReport rep;
    const int top = base.truncation();

    rep.iso_above = true;
    for (int i = std::max(n, 0); i + 2 <= top; ++i) {
        const int r = cup_rank(base, alpha, i);
        if (r != dim(base, i) || r != dim(base, i + 2)) {
            rep.iso_above = false;
            rep.detail = "cup with alpha is not bijective from degree " + std::to_string(i);
            break;
        }
    }

    Element power = base.one();
    for (int k = 1; 2 * k <= top; ++k) {
        power = base.multiply(power, alpha.value());
        if (power.is_zero()) {
            rep.nilpotency = k;
            break;
        }
    }
    if (alpha.is_zero())
        rep.nilpotency = 1;

    for (int i = std::max(n, 0); i <= top; ++i)
        if (dim(base, i) != 0) {
            rep.first_violation = i;
            break;
        }
    rep.pass = !rep.first_violation && rep.iso_above && rep.nilpotency.has_value();
    if (rep.first_violation) {
        if (!rep.detail.empty())
            rep.detail += "; ";
        rep.detail += "H^" + std::to_string(*rep.first_violation) + " is nonzero";
    } else if (!rep.nilpotency) {
        rep.detail = "alpha is not nilpotent within the truncation";
    }
    return rep;
}

std::optional<int> mod_p_index(const RingPresentation& base, const CharacteristicClass& alpha)
{
    if (alpha.is_zero())
        return std::nullopt;
    Element power = alpha.value();
    for (int k = 1;; ++k) {
        if (2 * (k + 1) > base.truncation())
            throw Error(ErrorKind::DegreeOverflow, "alpha^" + std::to_string(k) +
                                                       " is nonzero and the next power leaves the truncation");
        power = base.multiply(power, alpha.value());
        if (power.is_zero())
            return k;
    }
}

json gysin_report(const RingPresentation& base, const CharacteristicClass& alpha, int top_degree, int n)
{
    json j;
    j["alpha"] = base.format(alpha.value());
    std::optional<int> index;
    try {
        index = mod_p_index(base, alpha);
        j["index"] = index ? json(*index) : json("UNDEFINED");
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegreeOverflow)
            throw;
        j["index"] = "UNKNOWN";
    }
    j["predictions"] = pushforward_dims(base, alpha, top_degree);
    const auto v = verify_vanishing(n, base, alpha);
    j["vanishing"] = {{"n", n},
                      {"pass", v.pass},
                      {"first_violation", v.first_violation ? json(*v.first_violation) : json(nullptr)},
                      {"iso_above", v.iso_above},
                      {"nilpotency", v.nilpotency ? json(*v.nilpotency) : json(nullptr)}};
    return j;
}

} // namespace orbitcoh
