#include "orbitcoh/field.hpp"

#include "orbitcoh/error.hpp"

#include <string>

namespace orbitcoh {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::DuplicateGenerator: return "DuplicateGenerator";
    case ErrorKind::NonHomogeneousRelation: return "NonHomogeneousRelation";
    case ErrorKind::NonterminatingRewrite: return "NonterminatingRewrite";
    case ErrorKind::NonConfluentRelations: return "NonConfluentRelations";
    case ErrorKind::DegreeOutOfWindow: return "DegreeOutOfWindow";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::UnassignedGenerator: return "UnassignedGenerator";
    case ErrorKind::InvalidDifferential: return "InvalidDifferential";
    case ErrorKind::IncompatibleDifferential: return "IncompatibleDifferential";
    case ErrorKind::DifferentialNotSquareZero: return "DifferentialNotSquareZero";
    case ErrorKind::WrongDegreeAlpha: return "WrongDegreeAlpha";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

bool is_prime(std::int64_t n) noexcept
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

PrimeField::PrimeField(std::int64_t p)
{
    // products of two residues must fit in 64 bits
    if (p >= (std::int64_t{1} << 31))
        throw Error(ErrorKind::InvalidParams, "modulus too large: " + std::to_string(p));
    if (!is_prime(p))
        throw Error(ErrorKind::NotPrime, "p must be prime, got " + std::to_string(p));
    p_ = static_cast<Coeff>(p);
}

Coeff PrimeField::pow(Coeff a, std::uint64_t e) const noexcept
{
    Coeff result = 1 % p_;
    Coeff base = a % p_;
    while (e > 0) {
        if (e & 1)
            result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

Coeff PrimeField::inv(Coeff a) const
{
    if (a % p_ == 0)
        throw Error(ErrorKind::InvalidParams, "inverse of zero in Z_" + std::to_string(p_));
    return pow(a, p_ - 2);
}

} // namespace orbitcoh
