#include "rrw/closed_form.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "rrw/parallel.hpp"

namespace rrw {

RateConstraintSystem bec_bzt_system(const BecParamsBZT& params) {
  if (params.p < 0 || params.p > 1 || params.q < 0 || params.q > 1)
    throw ValidationError("bec_bzt_system: p, q in [0,1]");
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, params.p / 6.0 + params.q / 2.0);
  sys.add({1, 0}, params.p);
  sys.add({0, 1}, (1.0 - params.p) / 2.0 + 1.0 - params.q);
  return sys;
}

RateConstraintSystem bec_capacity_system(const BecParamsCap& params) {
  if (params.r < 0 || params.t > 1 || params.r > params.t || params.s < 0 || params.s > 1)
    throw ValidationError("bec_capacity_system: need 0 <= r <= t <= 1, 0 <= s <= 1");
  double a1 = params.r / 6.0 + params.s / 2.0;
  double private1 = (1.0 - params.r) / 2.0 + 1.0 - params.s;
  double private2 = (1.0 - params.t) / 2.0 + 1.0 - params.s;
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, a1);
  sys.add({1, 0}, params.t);
  sys.add({1, 1}, a1 + private1);
  sys.add({1, 1}, params.t + private2);
  return sys;
}

RegionApprox bec_frontier(BecKind kind, double grid_step, std::vector<RateVector> weights) {
  if (!(grid_step > 0.0) || grid_step > 0.1)
    throw ValidationError("bec_frontier: grid_step in (0, 0.1]");
  if (weights.empty()) weights = default_weights(2);
  Index steps = static_cast<Index>(std::llround(1.0 / grid_step));
  auto par = [&](Index i) { return std::min(1.0, i * grid_step); };

  int workers = thread_count();
  std::vector<RegionAccumulator> accs;
  for (int t = 0; t < workers; ++t) accs.emplace_back(weights, 2);

  if (kind == BecKind::bzt) {
    Index total = (steps + 1) * (steps + 1);
    parallel_chunks(total, [&](std::int64_t b, std::int64_t e) {
      size_t slot = static_cast<size_t>(b / ((total + workers - 1) / workers));
      slot = std::min(slot, accs.size() - 1);
      for (std::int64_t k = b; k < e; ++k) {
        BecParamsBZT p{par(k / (steps + 1)), par(k % (steps + 1))};
        accs[slot].add(bec_bzt_system(p), k);
      }
    }, workers);
  } else {
    // Rows 2 and 4 are nondecreasing in t, so within a (r, s) slice only the
    // largest grid t contributes to the union; t = 1 satisfies r <= t always.
    Index total = (steps + 1) * (steps + 1);
    parallel_chunks(total, [&](std::int64_t b, std::int64_t e) {
      size_t slot = static_cast<size_t>(b / ((total + workers - 1) / workers));
      slot = std::min(slot, accs.size() - 1);
      for (std::int64_t k = b; k < e; ++k) {
        BecParamsCap p{par(k / (steps + 1)), par(k % (steps + 1)), 1.0};
        accs[slot].add(bec_capacity_system(p), k);
      }
    }, workers);
  }
  for (size_t t = 1; t < accs.size(); ++t) accs[0].merge(accs[t]);
  return accs[0].finish();
}

namespace {

double slice_max_r1(const RateConstraintSystem& sys, double r0) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : sys.rows) {
    double c0 = row.coeffs(0), c1 = row.coeffs(1);
    if (c1 > 0) {
      best = std::min(best, (row.bound - c0 * r0) / c1);
    } else if (c0 * r0 > row.bound + 1e-12) {
      return -std::numeric_limits<double>::infinity();
    }
  }
  return std::max(best, -std::numeric_limits<double>::infinity());
}

}  // namespace

double bec_max_r1_at(BecKind kind, double r0) {
  // The R1 bounds fall with q (or s), so the binding common-rate row pins the
  // smallest admissible value; for the layered form both sum rows also rise
  // with t, leaving a one-parameter family to scan.
  auto eval = [&](double lead) -> double {
    if (lead < 0.0 || lead > 1.0) return -1.0;
    double follow = std::clamp(2.0 * (r0 - lead / 6.0), 0.0, 1.0);
    if (lead / 6.0 + follow / 2.0 + 1e-12 < r0) return -1.0;
    double r1 = kind == BecKind::bzt
                    ? slice_max_r1(bec_bzt_system({lead, follow}), r0)
                    : slice_max_r1(bec_capacity_system({lead, follow, 1.0}), r0);
    return std::isfinite(r1) ? std::max(0.0, r1) : -1.0;
  };
  double best = -1.0;
  for (int i = 0; i <= 4000; ++i) best = std::max(best, eval(i / 4000.0));
  // kink candidates where a row becomes active
  for (double lead : {r0, 6.0 * r0 - 3.0, 6.0 * r0, 0.0, 1.0})
    best = std::max(best, eval(lead));
  return best;
}

double gaussian_capacity_fn(double x) {
  if (x < 0) throw ValidationError("gaussian_capacity_fn: negative argument");
  return 0.5 * std::log2(1.0 + x);
}

namespace {

void check_gaussian_base(const GaussianParams& gp) {
  if (gp.power <= 0) throw ValidationError("gaussian: power must be positive");
  for (double n : gp.noise)
    if (n <= 0) throw ValidationError("gaussian: noise powers must be positive");
  if (gp.p1 < 0 || gp.p1 > gp.power)
    throw ValidationError("gaussian: p1 in [0, power]");
}

}  // namespace

RateConstraintSystem gaussian_bzt_system(const GaussianParams& gp) {
  check_gaussian_base(gp);
  if (gp.alpha < 0 || gp.alpha > 1 || gp.beta < 0 || gp.beta > 1)
    throw ValidationError("gaussian_bzt_system: alpha, beta in [0,1]");
  const auto& n = gp.noise;
  double p1 = gp.p1, p2 = gp.power - gp.p1;
  double ca = 1 - gp.alpha, cb = 1 - gp.beta;
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, gaussian_capacity_fn(gp.alpha * p1 / (ca * p1 + n[0] + n[1] + n[2])) +
                      gaussian_capacity_fn(gp.beta * p2 / (cb * p2 + n[3] + n[4])));
  sys.add({1, 0}, gaussian_capacity_fn(gp.alpha * p1 / (ca * p1 + n[0])));
  sys.add({0, 1}, gaussian_capacity_fn(ca * p1 / (n[0] + n[1])) +
                      gaussian_capacity_fn(cb * p2 / n[3]));
  return sys;
}

RateConstraintSystem gaussian_inner_system(const GaussianParams& gp) {
  check_gaussian_base(gp);
  if (gp.a1 < 0 || gp.a2 < 0 || gp.b1 < 0 || gp.b2 < 0 || gp.a1 + gp.b1 > 1 ||
      gp.a2 + gp.b2 > 1)
    throw ValidationError("gaussian_inner_system: need a_i, b_i >= 0 and a_i + b_i <= 1");
  const auto& n = gp.noise;
  double p1 = gp.p1, p2 = gp.power - gp.p1;
  double ca1 = 1 - gp.a1, ca2 = 1 - gp.a2;
  double rest1 = 1 - gp.a1 - gp.b1, rest2 = 1 - gp.a2 - gp.b2;
  double cloud1 = gaussian_capacity_fn(gp.a1 * p1 / (ca1 * p1 + n[0] + n[1] + n[2]));
  double cloud2 = gaussian_capacity_fn(gp.a2 * p2 / (ca2 * p2 + n[3] + n[4]));
  double mid1 = gaussian_capacity_fn((gp.a1 + gp.b1) * p1 / (rest1 * p1 + n[0]));
  RateConstraintSystem sys;
  sys.dim = 2;
  sys.add({1, 0}, cloud1 + cloud2);
  sys.add({1, 0}, mid1);
  sys.add({1, 1}, gaussian_capacity_fn(ca1 * p1 / (n[0] + n[1])) +
                      gaussian_capacity_fn(ca2 * p2 / n[3]) + cloud1 + cloud2);
  sys.add({1, 1}, gaussian_capacity_fn(rest1 * p1 / (n[0] + n[1])) +
                      gaussian_capacity_fn(rest2 * p2 / n[3]) + mid1);
  return sys;
}

double max_r0_at_r1(const RateConstraintSystem& sys, double r1) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : sys.rows) {
    double c0 = row.coeffs(0), c1 = row.coeffs(1);
    if (c0 > 0) {
      best = std::min(best, (row.bound - c1 * r1) / c0);
    } else if (c1 * r1 > row.bound + 1e-12) {
      return -std::numeric_limits<double>::infinity();
    }
  }
  return best;
}

double gaussian_bzt_max_r0(double power, const std::array<double, 5>& noise, double r1) {
  // For fixed (alpha, p1) the largest beta compatible with the R1 row is
  // pinned in closed form; then R0 is a 1-D scan over alpha inside a 1-D
  // refine over p1.
  auto eval = [&](double p1, double alpha) -> double {
    double p2 = power - p1;
    GaussianParams gp;
    gp.power = power;
    gp.noise = noise;
    gp.p1 = p1;
    gp.alpha = alpha;
    double need = r1 - gaussian_capacity_fn((1 - alpha) * p1 / (noise[0] + noise[1]));
    double beta;
    if (need <= 0) {
      beta = 1.0;
    } else {
      if (p2 <= 0) return -1.0;
      double cb = noise[3] * (std::exp2(2.0 * need) - 1.0) / p2;
      if (cb > 1.0) return -1.0;
      beta = 1.0 - cb;
    }
    gp.beta = beta;
    double r0 = max_r0_at_r1(gaussian_bzt_system(gp), r1);
    return std::isfinite(r0) ? std::max(0.0, r0) : -1.0;
  };
  auto best_alpha = [&](double p1) {
    double best = -1.0, arg = 0.0;
    for (int i = 0; i <= 400; ++i) {
      double alpha = i / 400.0;
      double v = eval(p1, alpha);
      if (v > best) { best = v; arg = alpha; }
    }
    // local refine
    double lo = std::max(0.0, arg - 1.0 / 400), hi = std::min(1.0, arg + 1.0 / 400);
    for (int it = 0; it < 80; ++it) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (eval(p1, m1) < eval(p1, m2)) lo = m1; else hi = m2;
    }
    return std::max(best, eval(p1, 0.5 * (lo + hi)));
  };
  double best = -1.0, argp = 0.5;
  for (int i = 1; i < 200; ++i) {
    double p1 = power * i / 200.0;
    double v = best_alpha(p1);
    if (v > best) { best = v; argp = p1; }
  }
  double lo = std::max(1e-9, argp - power / 200), hi = std::min(power - 1e-9, argp + power / 200);
  for (int it = 0; it < 60; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (best_alpha(m1) < best_alpha(m2)) lo = m1; else hi = m2;
  }
  return std::max(best, best_alpha(0.5 * (lo + hi)));
}

}  // namespace rrw
