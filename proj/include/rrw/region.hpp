#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "rrw/errors.hpp"

namespace rrw {

using Index = Eigen::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RateVector = Eigen::VectorXd;

// One row: coeffs . R <= bound, with small integer coefficients.
struct LinearRateInequality {
  Eigen::VectorXi coeffs;
  double bound = 0.0;
};

// Intersection of rows plus the implicit nonnegativity R >= 0.
struct RateConstraintSystem {
  int dim = 2;
  std::vector<LinearRateInequality> rows;

  void add(std::initializer_list<int> coeffs, double bound);
};

bool polytope_contains(const RateConstraintSystem& sys, const RateVector& pt,
                       double tol = 1e-9);

struct WeightedOptimum {
  double value = 0.0;
  RateVector arg;
};

// Exact LP over the polytope by vertex enumeration (dim <= 3). Ties broken
// toward the lexicographically largest rate vector.
WeightedOptimum max_weighted_rate(const RateConstraintSystem& sys, const RateVector& w);

// All vertices of the polytope (including axis intersections).
std::vector<RateVector> enumerate_vertices(const RateConstraintSystem& sys);

// Support-function sketch of a region: per-weight best value and achieving
// point, plus the deduplicated Pareto points that generated them.
struct RegionApprox {
  int dim = 2;
  std::vector<RateVector> weights;
  std::vector<double> supports;
  std::vector<RateVector> argmax_points;
  std::vector<RateVector> boundary_points;
};

// Streaming union of per-distribution polytopes: keeps, per weight, the best
// support seen. Merge is associative and deterministic (value, then lex point,
// then lowest tag), so parallel producers fold to the same result.
class RegionAccumulator {
 public:
  RegionAccumulator(std::vector<RateVector> weights, int dim);

  void add(const RateConstraintSystem& sys, std::int64_t tag = -1);
  void merge(const RegionAccumulator& other);
  RegionApprox finish() const;

  const std::vector<RateVector>& weights() const { return weights_; }
  std::int64_t best_tag(size_t weight_idx) const { return tags_[weight_idx]; }
  double support(size_t weight_idx) const { return supports_[weight_idx]; }

 private:
  int dim_;
  std::vector<RateVector> weights_;
  std::vector<double> supports_;
  std::vector<RateVector> args_;
  std::vector<std::int64_t> tags_;
};

RegionApprox union_frontier(std::span<const RateConstraintSystem> systems,
                            const std::vector<RateVector>& weights);

// 181 directions sweeping 0..90 degrees in 0.5-degree steps (dim 2), or an
// octant grid for dim 3.
std::vector<RateVector> default_weights(int dim, int count = 181);

// Corner points of the Pareto polyline of a 2-D region (collinear interior
// points removed).
std::vector<RateVector> frontier_vertices(const RegionApprox& approx,
                                          double collinear_tol = 1e-7);

// Largest last-coordinate on the frontier at fixed leading coordinates, read
// from the stored supports (upper bound on the true value; exact when a stored
// weight is normal to the binding face).
double support_slice_max(const RegionApprox& approx, double r0);

struct DominanceReport {
  double max_gap = 0.0;            // max over weights of support(a) - support(b)
  double max_reverse_gap = 0.0;    // max over weights of support(b) - support(a)
  std::vector<size_t> exceed_idx;  // weights where a exceeds b by more than margin
  bool a_dominates_somewhere = false;
  bool b_never_exceeds = true;     // within margin
};

DominanceReport region_dominates(const RegionApprox& a, const RegionApprox& b,
                                 double margin = 1e-6);

std::string region_to_csv(const RegionApprox& approx);
std::string region_to_json(const RegionApprox& approx);

}  // namespace rrw
