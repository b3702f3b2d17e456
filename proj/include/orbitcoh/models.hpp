#pragma once

#include "orbitcoh/presentation.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <utility>

namespace orbitcoh {

enum class ModelKind {
    Lens,       // exterior(a) (x) Z_p[b]/(b^m), |a| = 1, |b| = 2
    RpOddMod2,  // Z_2[a]/(a^{2m}), |a| = 1
    Cp,         // Z_p[z]/(z^m), |z| = 2
    BgTrunc,    // Z_p[t]/(t^{K+1}), |t| = 2
};

std::optional<ModelKind> parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

struct ModelParams {
    int p = 2;
    int m = 1;               // Lens, RpOddMod2, Cp
    int k = 0;               // BgTrunc: top power of t
    std::optional<int> truncation;  // defaults to one past the top nonzero degree
};

RingPresentation model_space(ModelKind kind, const ModelParams& params);

RingPresentation lens_space(int p, int m, std::optional<int> truncation = std::nullopt);
RingPresentation rp_odd_mod2(int m, std::optional<int> truncation = std::nullopt);
RingPresentation complex_projective(int p, int m, std::optional<int> truncation = std::nullopt);
RingPresentation bg_truncated(int p, int k, std::optional<int> truncation = std::nullopt);

/// Constants of the orbit-space ring with deg y_q = q, keyed by (q, q') with
/// q < q': y_q y_q' = A x^{(q+q')/2} + B z x^{(q+q'-2p)/2}.
using PairConstants = std::map<std::pair<int, int>, int>;

/// Z_p[x, y_1, y_3, ..., y_{2p-3}, z] / (x^p, z^n, x y_q, y_q y_q' - A x^.. - B z x^..)
/// with |x| = 2, |y_q| = q, |z| = 2p. Generators are ordered y_1, ..., x, z so
/// that each product y_q y_q' leads its relation. A is admissible only for
/// q + q' < 2p and B only for q + q' > 2p (q != q' in both cases); whether a
/// given choice is consistent is decided by the confluence check.
RingPresentation theorem1_ring(int p, int n, const PairConstants& a = {}, const PairConstants& b = {},
                               std::optional<int> truncation = std::nullopt);

/// Name of the odd generator of degree q in theorem1_ring.
std::string y_name(int q);

} // namespace orbitcoh
