#pragma once

#include <functional>

#include "rrw/rng.hpp"
#include "rrw/symbolic.hpp"

namespace rrw {

// Named constraint systems wired into the derivation pipelines:
//   prop5-raw   - code-generation/decoding conditions behind the two-message
//                 inner bound (split variables S1..S3, bin rates T2, T3)
//   thm2-raw    - conditions behind the three-message inner bound
//   appC-equiv  - the richer system with the inserted middle layer tU2
//   appC-R1zero - appC-equiv specialized to R1 = 0
SymbolicSystem build_named_system(const std::string& id);

// Target templates the derivations are checked against.
SymbolicSystem prop5_template();
SymbolicSystem thm2_template();

using ValuationSampler = std::function<std::map<std::string, double>(Rng&)>;

// Symbol valuations taken from actual sampled auxiliary/channel pairs (every
// symbol evaluated as a true conditional mutual information).
std::map<std::string, double> triple_symbol_valuation(Rng& rng);
std::map<std::string, double> extended_symbol_valuation(Rng& rng);
ValuationSampler sampler_for(const std::string& system_id);

struct EquivReport {
  bool equivalent = true;
  int trials = 0;
  long long points = 0;
  std::string counterexample;
};

// Membership agreement between two systems with the same free variables, on
// sampled symbol valuations and rate points (near-boundary points are biased
// in; points inside the fp guard band are skipped).
EquivReport numeric_equiv(const SymbolicSystem& a, const SymbolicSystem& b,
                          const ValuationSampler& sampler, int trials,
                          int points_per_trial, std::uint64_t seed);

// Rows that never cut the polytope of the remaining rows across sampled
// valuations (certified by exact small LPs when the free dimension is <= 3).
std::vector<bool> flag_redundant_rows(const SymbolicSystem& sys,
                                      const ValuationSampler& sampler, int valuations,
                                      std::uint64_t seed);

struct Derivation {
  SymbolicSystem input;    // after pipeline prep (nonnegativity, rate-sum vars)
  SymbolicSystem result;
  std::vector<std::string> transcript;
};

// Full pipeline for a named system: nonnegativity rows and rate-sum bookkeeping
// are applied first, then the eliminations (defaulted per system when empty).
Derivation run_named_derivation(const std::string& id,
                                std::vector<std::string> eliminate_order = {});

// One-dimensional feasibility oracle used by the soundness property test:
// a point satisfies eliminate(sys, var) iff some value of var extends it.
bool extension_exists(const NumericSystem& ns, const std::string& var, const Vec& others,
                      const std::vector<std::string>& other_order);

std::string system_to_json(const SymbolicSystem& sys);

}  // namespace rrw
