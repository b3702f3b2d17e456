#pragma once

#include "orbitcoh/serialize.hpp"
#include "orbitcoh/specseq.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace orbitcoh {

struct ScenarioReport {
    std::string scenario;
    json inputs = json::object();
    std::string verdict;     // PASS, FAIL, REJECTED, ADMISSIBLE, CONFIRMED, NOT-CONFIRMED
    bool expected = false;   // verdict is the one predicted for these inputs
    std::vector<Check> checks;
    std::string expected_presentation;
    std::vector<int> total_dims;
    json index;              // integer, "UNDEFINED" or null
    json transcript;         // null when no spectral sequence was run
    std::string reason;      // rejection message

    json to_json() const;
};

/// {pages:[{r, mode, dims:[[k,l,dim]], differentials:[{from, to, rank}]}], e_inf_dims,
///  total_dims, collapse_page, assumed_zero_pages}
json transcript_json(const RunResult& result);
/// [[k, l, dim], ...] for the nonzero cells of total degree <= max_total.
json page_dims_json(const BigradedPage& page, int max_total);

/// The two Case I differentials on BG x L^{2m-1}, m = np.
std::vector<DifferentialSpec> case1_specs(const SerreE2& e2, int p, bool transgression = true);
/// Dimension of H^j of the orbit space in Case I: 1 except 0 at j = 2qp - 1 and j > 2np - 2.
int case1_betti(int p, int n, int j);

/// A window override replaces the default window; the report then checks that it guards the target.
ScenarioReport theorem1_case1(int p, int n, std::optional<Window> window = std::nullopt);
ScenarioReport theorem1_case2(int p, int m, std::optional<Window> window = std::nullopt);
ScenarioReport theorem2(int m, std::optional<Window> window = std::nullopt);
ScenarioReport forced_divisibility(int p, int m);
ScenarioReport no_transgression_contradiction(int p, int n, std::optional<Window> window = std::nullopt);
ScenarioReport example_hopf(int p, int m);
/// Every d_2 with d(a) = lambda t, d(b) = mu t a; consistent exactly when
/// lambda mu = 0 and (mu = 0 or p | m).
ScenarioReport d2_dichotomy(int p, int m);
/// alpha in {0, z} on Z_2[z]/(z^m): only alpha = 0 predicts the Betti numbers of RP^{2m-1}.
ScenarioReport mod2_alpha(int m);

using ScenarioJob = std::function<ScenarioReport()>;

/// Runs jobs concurrently; results come back in job order.
std::vector<ScenarioReport> run_batch(const std::vector<ScenarioJob>& jobs);

/// The full catalogue over primes p <= max_p, n <= max_n, m <= max_m.
std::vector<ScenarioJob> catalogue(int max_p, int max_n, int max_m);

} // namespace orbitcoh
