#pragma once

#include <cstdint>

namespace orbitcoh {

/// Residues are stored as canonical representatives in [0, p).
using Coeff = std::uint32_t;

/// The prime field Z_p. Primality is checked at construction.
class PrimeField {
public:
    explicit PrimeField(std::int64_t p);

    Coeff p() const noexcept { return p_; }

    Coeff reduce(std::int64_t v) const noexcept {
        auto r = v % static_cast<std::int64_t>(p_);
        return static_cast<Coeff>(r < 0 ? r + p_ : r);
    }
    Coeff add(Coeff a, Coeff b) const noexcept { return static_cast<Coeff>((std::uint64_t{a} + b) % p_); }
    Coeff sub(Coeff a, Coeff b) const noexcept { return static_cast<Coeff>((std::uint64_t{a} + p_ - b) % p_); }
    Coeff neg(Coeff a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Coeff mul(Coeff a, Coeff b) const noexcept { return static_cast<Coeff>((std::uint64_t{a} * b) % p_); }
    Coeff pow(Coeff a, std::uint64_t e) const noexcept;
    // a must be nonzero.
    Coeff inv(Coeff a) const;

    /// (-1)^e as a residue.
    Coeff sign(int e) const noexcept { return (e & 1) ? p_ - 1 : 1 % p_; }

    bool operator==(const PrimeField&) const = default;

private:
    Coeff p_;
};

bool is_prime(std::int64_t n) noexcept;

} // namespace orbitcoh
