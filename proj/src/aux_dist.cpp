#include "rrw/aux_dist.hpp"

#include <cmath>

namespace rrw {

AuxSingle::AuxSingle(FinitePmf pu, StochasticMatrix pxu)
    : p_u(std::move(pu)), p_x_given_u(std::move(pxu)) {
  if (p_u.size() != p_x_given_u.rows())
    throw DimensionError("AuxSingle: |U| does not match p(x|u) rows");
}

AuxSingle AuxSingle::constant(Index nx, const FinitePmf& px) {
  if (px.size() != nx) throw DimensionError("AuxSingle::constant: pmf size mismatch");
  return AuxSingle(FinitePmf::uniform(1), StochasticMatrix(px.probs().transpose()));
}

AuxSingle AuxSingle::identity(const FinitePmf& px) {
  return AuxSingle(px, StochasticMatrix::identity(px.size()));
}

AuxChain::AuxChain(FinitePmf pu1, StochasticMatrix pu2u1, StochasticMatrix pxu2)
    : p_u1(std::move(pu1)),
      p_u2_given_u1(std::move(pu2u1)),
      p_x_given_u2(std::move(pxu2)) {
  if (p_u1.size() != p_u2_given_u1.rows() || p_u2_given_u1.cols() != p_x_given_u2.rows())
    throw DimensionError("AuxChain: stages do not compose");
}

AuxTriple::AuxTriple(FinitePmf pu1, Index nv2, Index nv3, StochasticMatrix pvv,
                     StochasticMatrix px)
    : p_u1(std::move(pu1)),
      n_v2(nv2),
      n_v3(nv3),
      p_v2v3_given_u1(std::move(pvv)),
      p_x_given_u1v2v3(std::move(px)) {
  if (n_v2 <= 0 || n_v3 <= 0) throw ValidationError("AuxTriple: alphabet sizes positive");
  if (p_v2v3_given_u1.rows() != p_u1.size() || p_v2v3_given_u1.cols() != n_v2 * n_v3)
    throw DimensionError("AuxTriple: p(v2,v3|u1) shape mismatch");
  if (p_x_given_u1v2v3.rows() != p_u1.size() * n_v2 * n_v3)
    throw DimensionError("AuxTriple: p(x|u1,v2,v3) shape mismatch");
}

namespace {

// prefix: mass of the auxiliary block per x; law rows appended contiguously.
JointPmf assemble(const std::vector<Index>& aux_dims, const Mat& prefix_by_x,
                  const BroadcastChannel3& ch) {
  auto [ny1, ny2, ny3] = ch.output_sizes();
  Index ny = ny1 * ny2 * ny3;
  Index pre = prefix_by_x.rows();
  std::vector<Index> dims = aux_dims;
  dims.push_back(ch.input_size());
  dims.push_back(ny1);
  dims.push_back(ny2);
  dims.push_back(ny3);
  Vec flat(pre * ch.input_size() * ny);
  for (Index a = 0; a < pre; ++a)
    for (Index x = 0; x < ch.input_size(); ++x) {
      double m = prefix_by_x(a, x);
      flat.segment((a * ch.input_size() + x) * ny, ny) = m * ch.law().row(x).transpose();
    }
  return JointPmf(std::move(dims), std::move(flat));
}

}  // namespace

JointPmf aux_channel_joint(const AuxSingle& aux, const BroadcastChannel3& ch) {
  if (aux.p_x_given_u.cols() != ch.input_size())
    throw DimensionError("aux_channel_joint: |X| mismatch");
  Mat pre(aux.p_u.size(), ch.input_size());
  for (Index u = 0; u < aux.p_u.size(); ++u)
    pre.row(u) = aux.p_u[u] * aux.p_x_given_u.matrix().row(u);
  return assemble({aux.p_u.size()}, pre, ch);
}

JointPmf aux_channel_joint(const AuxChain& aux, const BroadcastChannel3& ch) {
  if (aux.p_x_given_u2.cols() != ch.input_size())
    throw DimensionError("aux_channel_joint: |X| mismatch");
  Index n1 = aux.p_u1.size(), n2 = aux.p_u2_given_u1.cols();
  Mat pre(n1 * n2, ch.input_size());
  for (Index u1 = 0; u1 < n1; ++u1)
    for (Index u2 = 0; u2 < n2; ++u2)
      pre.row(u1 * n2 + u2) =
          aux.p_u1[u1] * aux.p_u2_given_u1(u1, u2) * aux.p_x_given_u2.matrix().row(u2);
  return assemble({n1, n2}, pre, ch);
}

JointPmf aux_channel_joint(const AuxTriple& aux, const BroadcastChannel3& ch) {
  if (aux.p_x_given_u1v2v3.cols() != ch.input_size())
    throw DimensionError("aux_channel_joint: |X| mismatch");
  Index n1 = aux.p_u1.size();
  Mat pre(n1 * aux.n_v2 * aux.n_v3, ch.input_size());
  for (Index u1 = 0; u1 < n1; ++u1)
    for (Index v2 = 0; v2 < aux.n_v2; ++v2)
      for (Index v3 = 0; v3 < aux.n_v3; ++v3) {
        Index row = (u1 * aux.n_v2 + v2) * aux.n_v3 + v3;
        pre.row(row) = aux.p_u1[u1] * aux.p_v2v3_given_u1(u1, v2 * aux.n_v3 + v3) *
                       aux.p_x_given_u1v2v3.matrix().row(row);
      }
  return assemble({n1, aux.n_v2, aux.n_v3}, pre, ch);
}

AuxChain chain_from_triple(const AuxTriple& aux, Index nx) {
  Index n1 = aux.p_u1.size();
  Index n2 = n1 * aux.n_v2;
  Mat pu2(n1, n2);
  pu2.setZero();
  Mat px = Mat::Zero(n2, nx);
  for (Index u1 = 0; u1 < n1; ++u1)
    for (Index v2 = 0; v2 < aux.n_v2; ++v2) {
      double pv2 = 0.0;
      Vec xmass = Vec::Zero(nx);
      for (Index v3 = 0; v3 < aux.n_v3; ++v3) {
        double m = aux.p_v2v3_given_u1(u1, v2 * aux.n_v3 + v3);
        pv2 += m;
        xmass += m * aux.p_x_given_u1v2v3.matrix()
                         .row((u1 * aux.n_v2 + v2) * aux.n_v3 + v3)
                         .transpose();
      }
      Index u2 = u1 * aux.n_v2 + v2;
      pu2(u1, u2) = pv2;
      if (pv2 > kZeroProb)
        px.row(u2) = (xmass / pv2).transpose();
      else
        px.row(u2).setConstant(1.0 / static_cast<double>(nx));
    }
  return AuxChain(aux.p_u1, StochasticMatrix(std::move(pu2)), StochasticMatrix(std::move(px)));
}

AuxSingle erasure_single(double p) {
  if (p < 0.0 || p > 1.0) throw ValidationError("erasure_single: p in [0,1]");
  Vec pu(3);
  pu << p / 2.0, 1.0 - p, p / 2.0;
  Mat px(3, 2);
  px << 1.0, 0.0,
        0.5, 0.5,
        0.0, 1.0;
  return AuxSingle(FinitePmf(std::move(pu)), StochasticMatrix(std::move(px)));
}

AuxChain erasure_chain(double r, double t) {
  if (r < 0.0 || t > 1.0 || r > t) throw ValidationError("erasure_chain: need 0 <= r <= t <= 1");
  Vec pu1(3);
  pu1 << r / 2.0, 1.0 - r, r / 2.0;
  Mat stage(3, 3);
  stage.setZero();
  stage(0, 0) = 1.0;
  stage(2, 2) = 1.0;
  if (1.0 - r > kZeroProb) {
    stage(1, 0) = (t - r) / 2.0 / (1.0 - r);
    stage(1, 1) = (1.0 - t) / (1.0 - r);
    stage(1, 2) = (t - r) / 2.0 / (1.0 - r);
  } else {
    stage(1, 1) = 1.0;  // unreachable letter
  }
  Mat px(3, 2);
  px << 1.0, 0.0,
        0.5, 0.5,
        0.0, 1.0;
  return AuxChain(FinitePmf(std::move(pu1)), StochasticMatrix(std::move(stage)),
                  StochasticMatrix(std::move(px)));
}

FinitePmf random_pmf(Rng& rng, Index n) {
  Vec p(n);
  double s = 0.0;
  for (Index i = 0; i < n; ++i) {
    p(i) = -std::log(1.0 - rng.uniform());
    s += p(i);
  }
  return FinitePmf(p / s);
}

StochasticMatrix random_stochastic(Rng& rng, Index rows, Index cols) {
  Mat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    double s = 0.0;
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = -std::log(1.0 - rng.uniform());
      s += m(r, c);
    }
    m.row(r) /= s;
  }
  return StochasticMatrix(std::move(m));
}

AuxSingle random_single(Rng& rng, Index nu, Index nx) {
  return AuxSingle(random_pmf(rng, nu), random_stochastic(rng, nu, nx));
}

AuxChain random_chain(Rng& rng, Index nu1, Index nu2, Index nx) {
  return AuxChain(random_pmf(rng, nu1), random_stochastic(rng, nu1, nu2),
                  random_stochastic(rng, nu2, nx));
}

AuxTriple random_triple(Rng& rng, Index nu1, Index nv2, Index nv3, Index nx) {
  return AuxTriple(random_pmf(rng, nu1), nv2, nv3,
                   random_stochastic(rng, nu1, nv2 * nv3),
                   random_stochastic(rng, nu1 * nv2 * nv3, nx));
}

BroadcastChannel3 random_channel(Rng& rng, Index nx, Index ny1, Index ny2, Index ny3) {
  return BroadcastChannel3::from_law(
      nx, {ny1, ny2, ny3}, random_stochastic(rng, nx, ny1 * ny2 * ny3).matrix());
}

BroadcastChannel3 random_multilevel_channel(Rng& rng, Index nx, Index ny1, Index ny2,
                                            Index ny3) {
  Mat p12 = random_stochastic(rng, nx, ny1 * ny2).matrix();
  StochasticMatrix q = random_stochastic(rng, ny1, ny3);
  return build_multilevel(p12, ny1, ny2, q);
}

BroadcastChannel3 random_deterministic_channel(Rng& rng, Index nx, Index ny1, Index ny2,
                                               Index ny3) {
  Mat law = Mat::Zero(nx, ny1 * ny2 * ny3);
  for (Index x = 0; x < nx; ++x) {
    Index y1 = static_cast<Index>(rng.below(static_cast<std::uint64_t>(ny1)));
    Index y2 = static_cast<Index>(rng.below(static_cast<std::uint64_t>(ny2)));
    Index y3 = static_cast<Index>(rng.below(static_cast<std::uint64_t>(ny3)));
    law(x, (y1 * ny2 + y2) * ny3 + y3) = 1.0;
  }
  return BroadcastChannel3::from_law(nx, {ny1, ny2, ny3}, std::move(law));
}

}  // namespace rrw
