#include "rrw/bounds.hpp"

#include <algorithm>

namespace rrw {

namespace {

double nn(double v) { return std::max(0.0, v); }

using Axes = std::initializer_list<Index>;

double mi(const JointPmf& j, Axes a, Axes b) {
  return mutual_information(j, std::span<const Index>(a.begin(), a.size()),
                            std::span<const Index>(b.begin(), b.size()));
}

double cmi(const JointPmf& j, Axes a, Axes b, Axes c) {
  return conditional_mi(j, std::span<const Index>(a.begin(), a.size()),
                        std::span<const Index>(b.begin(), b.size()),
                        std::span<const Index>(c.begin(), c.size()));
}

}  // namespace

bool known_bound_id(const std::string& id) {
  return id == "km3" || id == "bzt" || id == "thm1" || id == "prop5" || id == "prop6" ||
         id == "thm2" || id == "cor1";
}

int bound_dim(const std::string& id) { return id == "thm2" ? 3 : 2; }

RateConstraintSystem eval_km3(const AuxSingle& aux, const BroadcastChannel3& ch) {
  // Axes (U, X, Y1, Y2, Y3). On multilevel channels I(U;Y3) <= I(U;Y1), so the
  // receiver-1 row is dropped there and the system coincides with eval_bzt.
  JointPmf j = aux_channel_joint(aux, ch);
  RateConstraintSystem sys;
  sys.dim = 2;
  if (!ch.is_multilevel()) sys.add({1, 0}, nn(mi(j, {0}, {2})));
  sys.add({1, 0}, nn(mi(j, {0}, {3})));
  sys.add({1, 0}, nn(mi(j, {0}, {4})));
  sys.add({0, 1}, nn(cmi(j, {1}, {2}, {0})));
  return sys;
}

RateConstraintSystem eval_bzt(const AuxSingle& aux, const BroadcastChannel3& ch) {
  if (!ch.is_multilevel())
    throw ValidationError("bzt bound is defined for multilevel channels");
  return eval_km3(aux, ch);
}

RateConstraintSystem eval_thm1(const AuxChain& aux, const BroadcastChannel3& ch) {
  if (!ch.is_multilevel())
    throw ValidationError("thm1 bound requires a multilevel channel");
  // Axes (U1, U2, X, Y1, Y2, Y3)
  JointPmf j = aux_channel_joint(aux, ch);
  double i_u1_y3 = mi(j, {0}, {5});
  double i_u2_y2 = mi(j, {1}, {4});
  double i_x_y1_u1 = cmi(j, {2}, {3}, {0});
  double i_x_y1_u2 = cmi(j, {2}, {3}, {1});
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, nn(i_u1_y3));
  sys.add({1, 0}, nn(i_u2_y2));
  sys.add({1, 1}, nn(i_u1_y3 + i_x_y1_u1));
  sys.add({1, 1}, nn(i_u2_y2 + i_x_y1_u2));
  return sys;
}

RateConstraintSystem eval_prop5(const AuxTriple& aux, const BroadcastChannel3& ch) {
  // Axes (U1, V2, V3, X, Y1, Y2, Y3); U2 = (U1,V2) = {0,1}, U3 = (U1,V3) = {0,2}
  JointPmf j = aux_channel_joint(aux, ch);
  double i_u2_y2 = mi(j, {0, 1}, {5});
  double i_u3_y3 = mi(j, {0, 2}, {6});
  double i_23_1 = cmi(j, {1}, {2}, {0});  // I(U2;U3|U1) = I(V2;V3|U1)
  double i_x_y1 = mi(j, {3}, {4});
  double i_x_y1_u1 = cmi(j, {3}, {4}, {0});
  double i_x_y1_u2 = cmi(j, {3}, {4}, {0, 1});
  double i_x_y1_u3 = cmi(j, {3}, {4}, {0, 2});
  double i_x_y1_u23 = cmi(j, {3}, {4}, {0, 1, 2});
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, nn(i_u2_y2));
  sys.add({1, 0}, nn(i_u3_y3));
  sys.add({2, 0}, nn(i_u2_y2 + i_u3_y3 - i_23_1));
  sys.add({0, 1}, nn(i_x_y1_u2 + i_x_y1_u3));
  sys.add({0, 1}, nn(i_x_y1_u1));
  sys.add({1, 1}, nn(i_x_y1));
  sys.add({1, 1}, nn(i_u2_y2 + i_x_y1_u2));
  sys.add({1, 1}, nn(i_u3_y3 + i_x_y1_u3));
  sys.add({2, 1}, nn(i_u2_y2 + i_u3_y3 + i_x_y1_u23 - i_23_1));
  sys.add({2, 2}, nn(i_u2_y2 + i_x_y1_u2 + i_u3_y3 + i_x_y1_u3 - i_23_1));
  return sys;
}

RateConstraintSystem eval_prop6(const AuxTriple& aux, const BroadcastChannel3& ch) {
  JointPmf j = aux_channel_joint(aux, ch);
  double i_u1_y1 = mi(j, {0}, {4});
  double i_u2_y2 = mi(j, {0, 1}, {5});
  double i_u3_y3 = mi(j, {0, 2}, {6});
  double i_u2_y1_u1 = cmi(j, {1}, {4}, {0});
  double i_u3_y1_u1 = cmi(j, {2}, {4}, {0});
  double i_x_y1_u1 = cmi(j, {3}, {4}, {0});
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, nn(i_u1_y1));
  sys.add({1, 0}, nn(i_u2_y2 - i_u2_y1_u1));
  sys.add({1, 0}, nn(i_u3_y3 - i_u3_y1_u1));
  sys.add({0, 1}, nn(i_x_y1_u1));
  return sys;
}

RateConstraintSystem eval_thm2(const AuxTriple& aux, const BroadcastChannel3& ch) {
  JointPmf j = aux_channel_joint(aux, ch);
  double i_u2_y2 = mi(j, {0, 1}, {5});
  double i_u2_y2_u1 = cmi(j, {1}, {5}, {0});
  double i_u3_y3 = mi(j, {0, 2}, {6});
  double i_23_1 = cmi(j, {1}, {2}, {0});
  double i_x_y1 = mi(j, {3}, {4});
  double i_x_y1_u1 = cmi(j, {3}, {4}, {0});
  double i_x_y1_u2 = cmi(j, {3}, {4}, {0, 1});
  double i_x_y1_u3 = cmi(j, {3}, {4}, {0, 2});
  double i_x_y1_u23 = cmi(j, {3}, {4}, {0, 1, 2});
  RateConstraintSystem sys;
  sys.dim = 3;
  sys.add({1, 0, 0}, nn(i_u3_y3));
  sys.add({0, 1, 0}, nn(i_u2_y2_u1));
  sys.add({0, 1, 0}, nn(i_x_y1_u3));
  sys.add({0, 0, 1}, nn(i_x_y1_u2));
  sys.add({1, 1, 0}, nn(i_u2_y2));
  sys.add({1, 1, 0}, nn(i_u2_y2_u1 + i_u3_y3 - i_23_1));
  sys.add({2, 1, 0}, nn(i_u2_y2 + i_u3_y3 - i_23_1));
  sys.add({1, 0, 1}, nn(i_u3_y3 + i_x_y1_u23));
  sys.add({0, 1, 1}, nn(i_x_y1_u1));
  sys.add({1, 1, 1}, nn(i_x_y1));
  sys.add({1, 1, 1}, nn(i_u3_y3 + i_x_y1_u3));
  sys.add({1, 1, 1}, nn(i_u2_y2_u1 + i_u3_y3 + i_x_y1_u23 - i_23_1));
  sys.add({2, 1, 1}, nn(i_u2_y2 + i_u3_y3 + i_x_y1_u23 - i_23_1));
  sys.add({1, 2, 1}, nn(i_u2_y2_u1 + i_u3_y3 + i_x_y1_u3 - i_23_1));
  sys.add({2, 2, 1}, nn(i_u2_y2 + i_u3_y3 + i_x_y1_u3 - i_23_1));
  return sys;
}

RateConstraintSystem eval_cor1(const AuxSingle& aux, const BroadcastChannel3& ch) {
  JointPmf j = aux_channel_joint(aux, ch);
  double i_u_y3 = mi(j, {0}, {4});
  double i_x_y1_u = cmi(j, {1}, {2}, {0});
  double i_x_y2_u = cmi(j, {1}, {3}, {0});
  double i_x_y1 = mi(j, {1}, {2});
  double i_x_y2 = mi(j, {1}, {3});
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, nn(i_u_y3));
  sys.add({0, 1}, nn(i_x_y2_u));
  sys.add({0, 1}, nn(i_x_y1_u));
  sys.add({1, 1}, nn(i_x_y2));
  sys.add({1, 1}, nn(i_x_y1));
  return sys;
}

namespace {

// Branch-1 joint (V.., X1, Y21, Y11, Y31); aux stages prepended.
JointPmf branch1_joint(const Mat& aux_by_x1, const std::vector<Index>& aux_dims,
                       const ProductChannelSpec& spec) {
  const Mat& a1 = spec.branch1[0].matrix();
  const Mat& a2 = spec.branch1[1].matrix();
  const Mat& a3 = spec.branch1[2].matrix();
  Index nx1 = a1.rows(), ny21 = a1.cols(), ny11 = a2.cols(), ny31 = a3.cols();
  std::vector<Index> dims = aux_dims;
  dims.insert(dims.end(), {nx1, ny21, ny11, ny31});
  Index pre = aux_by_x1.rows();
  Vec flat = Vec::Zero(pre * nx1 * ny21 * ny11 * ny31);
  Index idx = 0;
  for (Index a = 0; a < pre; ++a)
    for (Index x1 = 0; x1 < nx1; ++x1)
      for (Index y21 = 0; y21 < ny21; ++y21)
        for (Index y11 = 0; y11 < ny11; ++y11)
          for (Index y31 = 0; y31 < ny31; ++y31, ++idx)
            flat(idx) = aux_by_x1(a, x1) * a1(x1, y21) * a2(y21, y11) * a3(y11, y31);
  return JointPmf(std::move(dims), std::move(flat));
}

// Branch-2 joint (V, X2, Y12, Y32).
JointPmf branch2_joint(const AuxSingle& v, const ProductChannelSpec& spec) {
  const Mat& b1 = spec.branch2[0].matrix();
  const Mat& b2 = spec.branch2[1].matrix();
  Index nx2 = b1.rows(), ny12 = b1.cols(), ny32 = b2.cols();
  if (v.p_x_given_u.cols() != nx2)
    throw DimensionError("eval_product: branch-2 auxiliary does not match |X2|");
  Index nv = v.p_u.size();
  Vec flat = Vec::Zero(nv * nx2 * ny12 * ny32);
  Index idx = 0;
  for (Index u = 0; u < nv; ++u)
    for (Index x2 = 0; x2 < nx2; ++x2)
      for (Index y12 = 0; y12 < ny12; ++y12)
        for (Index y32 = 0; y32 < ny32; ++y32, ++idx)
          flat(idx) = v.p_u[u] * v.p_x_given_u(u, x2) * b1(x2, y12) * b2(y12, y32);
  return JointPmf({nv, nx2, ny12, ny32}, std::move(flat));
}

}  // namespace

RateConstraintSystem eval_product_bzt(const AuxSingle& v1, const AuxSingle& v2,
                                      const ProductChannelSpec& spec) {
  if (v1.p_x_given_u.cols() != spec.branch1[0].rows())
    throw DimensionError("eval_product_bzt: branch-1 auxiliary does not match |X1|");
  Mat pre(v1.p_u.size(), v1.p_x_given_u.cols());
  for (Index u = 0; u < v1.p_u.size(); ++u)
    pre.row(u) = v1.p_u[u] * v1.p_x_given_u.matrix().row(u);
  JointPmf j1 = branch1_joint(pre, {v1.p_u.size()}, spec);  // (V1,X1,Y21,Y11,Y31)
  JointPmf j2 = branch2_joint(v2, spec);                    // (V2,X2,Y12,Y32)
  double i_v1_y31 = mi(j1, {0}, {4});
  double i_v1_y21 = mi(j1, {0}, {2});
  double i_x1_y11_v1 = cmi(j1, {1}, {3}, {0});
  double i_v2_y32 = mi(j2, {0}, {3});
  double i_x2_y12_v2 = cmi(j2, {1}, {2}, {0});
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, nn(i_v1_y31 + i_v2_y32));
  sys.add({1, 0}, nn(i_v1_y21));
  sys.add({0, 1}, nn(i_x1_y11_v1 + i_x2_y12_v2));
  return sys;
}

RateConstraintSystem eval_product_capacity(const AuxChain& branch1, const AuxSingle& v12,
                                           const ProductChannelSpec& spec) {
  if (branch1.p_x_given_u2.cols() != spec.branch1[0].rows())
    throw DimensionError("eval_product_capacity: branch-1 chain does not match |X1|");
  Index n11 = branch1.p_u1.size(), n21 = branch1.p_u2_given_u1.cols();
  Mat pre(n11 * n21, branch1.p_x_given_u2.cols());
  for (Index a = 0; a < n11; ++a)
    for (Index b = 0; b < n21; ++b)
      pre.row(a * n21 + b) = branch1.p_u1[a] * branch1.p_u2_given_u1(a, b) *
                             branch1.p_x_given_u2.matrix().row(b);
  JointPmf j1 = branch1_joint(pre, {n11, n21}, spec);  // (V11,V21,X1,Y21,Y11,Y31)
  JointPmf j2 = branch2_joint(v12, spec);              // (V12,X2,Y12,Y32)
  double i_v11_y31 = mi(j1, {0}, {5});
  double i_v21_y21 = mi(j1, {1}, {3});
  double i_x1_y11_v11 = cmi(j1, {2}, {4}, {0});
  double i_x1_y11_v21 = cmi(j1, {2}, {4}, {1});
  double i_v12_y32 = mi(j2, {0}, {3});
  double i_x2_y12_v12 = cmi(j2, {1}, {2}, {0});
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, nn(i_v11_y31 + i_v12_y32));
  sys.add({1, 0}, nn(i_v21_y21));
  sys.add({1, 1}, nn(i_v11_y31 + i_v12_y32 + i_x1_y11_v11 + i_x2_y12_v12));
  sys.add({1, 1}, nn(i_v21_y21 + i_x1_y11_v21 + i_x2_y12_v12));
  return sys;
}

RateConstraintSystem eval_setu3u1(const AuxChain& aux, const BroadcastChannel3& ch) {
  JointPmf j = aux_channel_joint(aux, ch);
  double i_u1_y3 = mi(j, {0}, {5});
  double i_u2_y2 = mi(j, {1}, {4});
  double i_x_y1 = mi(j, {2}, {3});
  double i_x_y1_u1 = cmi(j, {2}, {3}, {0});
  double i_x_y1_u2 = cmi(j, {2}, {3}, {1});
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, nn(i_u2_y2));
  sys.add({1, 0}, nn(i_u1_y3));
  sys.add({0, 1}, nn(i_x_y1_u1));
  sys.add({1, 1}, nn(i_x_y1));
  sys.add({1, 1}, nn(i_u2_y2 + i_x_y1_u2));
  sys.add({1, 1}, nn(i_u1_y3 + i_x_y1_u1));
  return sys;
}

}  // namespace rrw
