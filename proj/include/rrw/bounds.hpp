#pragma once

#include <string>

#include "rrw/aux_dist.hpp"
#include "rrw/region.hpp"

namespace rrw {

// Stable bound identifiers shared with the CLI:
//   km3   - single-auxiliary region, common rate limited by all three receivers
//   bzt   - single-auxiliary region for multilevel channels (receivers 2 and 3)
//   thm1  - two-level superposition region for multilevel channels
//   prop5 - two-message inner bound, both side receivers decode indirectly
//   prop6 - two-message outer bound
//   thm2  - three-message inner bound (rate triples)
//   cor1  - inner bound when the private message goes to receivers 1 and 2
bool known_bound_id(const std::string& id);
int bound_dim(const std::string& id);

RateConstraintSystem eval_km3(const AuxSingle& aux, const BroadcastChannel3& ch);
RateConstraintSystem eval_bzt(const AuxSingle& aux, const BroadcastChannel3& ch);
RateConstraintSystem eval_thm1(const AuxChain& aux, const BroadcastChannel3& ch);
RateConstraintSystem eval_prop5(const AuxTriple& aux, const BroadcastChannel3& ch);
RateConstraintSystem eval_prop6(const AuxTriple& aux, const BroadcastChannel3& ch);
RateConstraintSystem eval_thm2(const AuxTriple& aux, const BroadcastChannel3& ch);
RateConstraintSystem eval_cor1(const AuxSingle& aux, const BroadcastChannel3& ch);

// Factored evaluations for product channels (per-branch auxiliaries; the joint
// auxiliary is never materialized). v1/v2 act on the branch inputs.
RateConstraintSystem eval_product_bzt(const AuxSingle& v1, const AuxSingle& v2,
                                      const ProductChannelSpec& spec);
RateConstraintSystem eval_product_capacity(const AuxChain& branch1, const AuxSingle& v12,
                                           const ProductChannelSpec& spec);

// The prop5 polytope with U3 = U1 collapses to this three-family system.
RateConstraintSystem eval_setu3u1(const AuxChain& aux, const BroadcastChannel3& ch);

}  // namespace rrw
