#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "rrw/errors.hpp"

namespace rrw {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// Tolerances shared by the probability layer. All rates and entropies are in
// bits (log base 2); masses below kZeroProb are treated as exact zeros inside
// log terms.
inline constexpr double kProbTol = 1e-9;
inline constexpr double kZeroProb = 1e-12;
inline constexpr double kMiSlack = 1e-9;

// Probability vector over a finite alphabet. Immutable after construction.
class FinitePmf {
 public:
  explicit FinitePmf(Vec probs);

  static FinitePmf uniform(Index n);
  static FinitePmf point_mass(Index n, Index i);

  Index size() const { return p_.size(); }
  double operator[](Index i) const { return p_(i); }
  const Vec& probs() const { return p_; }

 private:
  Vec p_;
};

// Row-stochastic transition matrix p(col | row).
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Mat m);

  static StochasticMatrix identity(Index n);

  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }
  double operator()(Index r, Index c) const { return m_(r, c); }
  const Mat& matrix() const { return m_; }
  FinitePmf row(Index r) const { return FinitePmf(m_.row(r).transpose()); }

 private:
  Mat m_;
};

// Dense joint mass table over several finite axes, flat row-major storage
// (last axis fastest). Immutable after construction.
class JointPmf {
 public:
  JointPmf(std::vector<Index> dims, Vec flat);

  // p(a, b) = pa(a) * pb(b)
  static JointPmf independent(const FinitePmf& pa, const FinitePmf& pb);
  // p(x, y) = px(x) * ch(y | x), axes (X, Y)
  static JointPmf input_through(const FinitePmf& px, const StochasticMatrix& ch);

  Index axis_count() const { return static_cast<Index>(dims_.size()); }
  Index dim(Index axis) const { return dims_[static_cast<size_t>(axis)]; }
  const std::vector<Index>& dims() const { return dims_; }
  Index cell_count() const { return flat_.size(); }
  const Vec& flat() const { return flat_; }
  double at(std::span<const Index> idx) const;

  // Marginal over the kept axes, in the given order (order must be strictly
  // increasing over the original axes; reordering is not needed here).
  JointPmf marginal(std::span<const Index> keep) const;
  FinitePmf axis_pmf(Index axis) const;
  JointPmf permuted(std::span<const Index> perm) const;

  std::vector<Index> strides() const;

 private:
  std::vector<Index> dims_;
  Vec flat_;
};

double entropy(const FinitePmf& p);
double entropy(const Vec& raw);  // no validation; 0 log 0 := 0
double entropy(const JointPmf& j);
double entropy(const JointPmf& j, std::span<const Index> axes);

// I(axis0; axis1) of a two-axis joint.
double mutual_information(const JointPmf& j);
// I(axis0; axis1 | axis2) of a three-axis joint.
double conditional_mi(const JointPmf& j);

// Grouped forms used by the bound evaluators: axis groups must be disjoint.
double mutual_information(const JointPmf& j, std::span<const Index> a,
                          std::span<const Index> b);
double conditional_mi(const JointPmf& j, std::span<const Index> a,
                      std::span<const Index> b, std::span<const Index> c);

// Matrix product of transition kernels: (first.cols == second.rows).
StochasticMatrix compose_channels(const StochasticMatrix& first,
                                  const StochasticMatrix& second);
FinitePmf push_forward(const FinitePmf& p, const StochasticMatrix& ch);

// Clamp tiny numerical negatives to zero; anything below -kMiSlack means the
// computation itself is broken.
double clamp_information(double v);

}  // namespace rrw
