#pragma once

#include "rrw/channel.hpp"
#include "rrw/prob.hpp"
#include "rrw/rng.hpp"

namespace rrw {

// p(u, x) for single-auxiliary bounds.
struct AuxSingle {
  FinitePmf p_u;
  StochasticMatrix p_x_given_u;

  AuxSingle(FinitePmf pu, StochasticMatrix pxu);
  static AuxSingle constant(Index nx, const FinitePmf& px);  // |U| = 1
  static AuxSingle identity(const FinitePmf& px);            // U = X
};

// Markov chain U1 -> U2 -> X.
struct AuxChain {
  FinitePmf p_u1;
  StochasticMatrix p_u2_given_u1;
  StochasticMatrix p_x_given_u2;

  AuxChain(FinitePmf pu1, StochasticMatrix pu2u1, StochasticMatrix pxu2);
};

// Double-Markov triple with U2 = (U1, V2), U3 = (U1, V3); the embedding makes
// both U1 -> U2 -> (U3, X) and U1 -> U3 -> (U2, X) hold by construction.
struct AuxTriple {
  FinitePmf p_u1;
  Index n_v2, n_v3;
  StochasticMatrix p_v2v3_given_u1;     // rows u1, cols (v2, v3), v3 fastest
  StochasticMatrix p_x_given_u1v2v3;    // rows (u1, v2, v3), v3 fastest

  AuxTriple(FinitePmf pu1, Index nv2, Index nv3, StochasticMatrix pvv,
            StochasticMatrix px);
};

// Joint over (U, X, Y1, Y2, Y3).
JointPmf aux_channel_joint(const AuxSingle& aux, const BroadcastChannel3& ch);
// Joint over (U1, U2, X, Y1, Y2, Y3).
JointPmf aux_channel_joint(const AuxChain& aux, const BroadcastChannel3& ch);
// Joint over (U1, V2, V3, X, Y1, Y2, Y3).
JointPmf aux_channel_joint(const AuxTriple& aux, const BroadcastChannel3& ch);

// The (U1, U2 = (U1,V2)) chain induced by a triple; preserves the (U1,U2,X)
// marginal.
AuxChain chain_from_triple(const AuxTriple& aux, Index nx);

// Figure-style erasure auxiliaries for a binary input: U over {0,E,1} with
// mass (p/2, 1-p, p/2); U=0 and U=1 pin X, U=E leaves X uniform.
AuxSingle erasure_single(double p);
// Branch chain V_a -> V_b -> X for a binary input, with marginals
// (r/2, 1-r, r/2) and (t/2, 1-t, t/2), r <= t.
AuxChain erasure_chain(double r, double t);

FinitePmf random_pmf(Rng& rng, Index n);
StochasticMatrix random_stochastic(Rng& rng, Index rows, Index cols);
AuxSingle random_single(Rng& rng, Index nu, Index nx);
AuxChain random_chain(Rng& rng, Index nu1, Index nu2, Index nx);
AuxTriple random_triple(Rng& rng, Index nu1, Index nv2, Index nv3, Index nx);

// Random small channels for property tests.
BroadcastChannel3 random_channel(Rng& rng, Index nx, Index ny1, Index ny2, Index ny3);
BroadcastChannel3 random_multilevel_channel(Rng& rng, Index nx, Index ny1, Index ny2,
                                            Index ny3);
BroadcastChannel3 random_deterministic_channel(Rng& rng, Index nx, Index ny1, Index ny2,
                                               Index ny3);

}  // namespace rrw
