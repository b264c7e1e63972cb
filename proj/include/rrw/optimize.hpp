#pragma once

#include <string>

#include "rrw/bounds.hpp"

namespace rrw {

struct SearchConfig {
  int grid_levels = 21;        // grid points per structured parameter in [0,1]
  int random_restarts = 120;
  int refine_iters = 3;        // coordinate-refinement sweeps per weight
  std::uint64_t seed = 1;
  // Per-auxiliary alphabet caps; 0 derives min(per-bound cardinality limit, 8).
  // Requesting more than a bound's limit is an error where one applies.
  Index cap_u1 = 0, cap_u2 = 0, cap_u3 = 0;
  bool use_paper_caps = false;  // lift the desk-scale cap of 8
};

struct AuxCaps {
  Index u1 = 8, u2 = 8, u3 = 8;
};

AuxCaps resolve_caps(const std::string& bound_id, Index nx, const SearchConfig& cfg);

// Best support per weight over (a) a grid of structured auxiliaries, (b)
// seeded random restarts, (c) per-weight coordinate refinement with a
// shrinking multiplicative step. Deterministic given cfg.seed.
RegionApprox optimize_region(const std::string& bound_id, const BroadcastChannel3& ch,
                             const SearchConfig& cfg,
                             const std::vector<RateVector>& weights);

// Same search restricted to U3 = U1 inside the prop5 parametrization (the
// triple keeps a single-letter V3); used by the less-noisy consistency checks.
RegionApprox optimize_prop5_u3u1(const BroadcastChannel3& ch, const SearchConfig& cfg,
                                 const std::vector<RateVector>& weights);

}  // namespace rrw
