#pragma once

#include <array>

#include "rrw/region.hpp"

namespace rrw {

// Closed parametric forms for the worked product erasure example and for the
// Gaussian product example under Gaussian signalling.

enum class BecKind { bzt, capacity };

struct BecParamsBZT {
  double p = 0.0, q = 0.0;
};

struct BecParamsCap {
  double r = 0.0, s = 0.0, t = 0.0;  // 0 <= r <= t <= 1, 0 <= s <= 1
};

RateConstraintSystem bec_bzt_system(const BecParamsBZT& params);
RateConstraintSystem bec_capacity_system(const BecParamsCap& params);

// Union frontier over the parameter grid (default step 0.005, 181 weights).
RegionApprox bec_frontier(BecKind kind, double grid_step = 0.005,
                          std::vector<RateVector> weights = {});

// Largest R1 with (r0, R1) in the region; parameters refined well below 1e-6.
double bec_max_r1_at(BecKind kind, double r0);

struct GaussianParams {
  double power = 1.0;
  std::array<double, 5> noise{0.4, 0.1, 0.1, 0.5, 0.1};
  double p1 = 0.5;                        // power split for branch 1
  double alpha = 0.0, beta = 0.0;         // common-message fractions (BZT form)
  double a1 = 0.0, a2 = 0.0;              // cloud fractions (inner form)
  double b1 = 0.0, b2 = 0.0;              // middle-layer fractions (inner form)
};

// 0.5 * log2(1 + x)
double gaussian_capacity_fn(double x);

RateConstraintSystem gaussian_bzt_system(const GaussianParams& gp);
RateConstraintSystem gaussian_inner_system(const GaussianParams& gp);

// Largest R0 such that (R0, r1) satisfies the system.
double max_r0_at_r1(const RateConstraintSystem& sys, double r1);

// Maximum of max_r0_at_r1 over (alpha, beta, p1) for the BZT form.
double gaussian_bzt_max_r0(double power, const std::array<double, 5>& noise, double r1);

}  // namespace rrw
