#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "rrw/closed_form.hpp"
#include "rrw/optimize.hpp"

using namespace rrw;

namespace {

BroadcastChannel3 noiseless_channel(Index nx) {
  Mat law = Mat::Zero(nx, nx * nx * nx);
  for (Index x = 0; x < nx; ++x) law(x, (x * nx + x) * nx + x) = 1.0;
  return BroadcastChannel3::from_law(nx, {nx, nx, nx}, law);
}

SearchConfig quick() {
  SearchConfig cfg;
  cfg.grid_levels = 11;
  cfg.random_restarts = 24;
  cfg.refine_iters = 2;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("caps derive from the per-bound cardinality limits") {
  SearchConfig cfg;
  AuxCaps caps = resolve_caps("thm1", 2, cfg);
  CHECK(caps.u1 == 6);   // |X| + 4 = 6 below the desk cap
  CHECK(caps.u2 == 8);   // |X|^2 + 5|X| + 4 = 18, desk-capped at 8
  cfg.use_paper_caps = true;
  caps = resolve_caps("thm1", 2, cfg);
  CHECK(caps.u2 == 18);
  cfg = SearchConfig{};
  cfg.cap_u1 = 7;
  CHECK_THROWS_AS(resolve_caps("thm1", 2, cfg), ValidationError);  // above |X|+4
  cfg.cap_u1 = 5;
  CHECK(resolve_caps("thm1", 2, cfg).u1 == 5);
  CHECK(resolve_caps("prop6", 2, SearchConfig{}).u1 == 8);
}

TEST_CASE("unknown bound id is rejected") {
  BroadcastChannel3 ch = noiseless_channel(2);
  CHECK_THROWS_AS(optimize_region("nope", ch, quick(), default_weights(2, 5)),
                  ValidationError);
}

TEST_CASE("noiseless identical receivers: layered search finds the full sum rate") {
  BroadcastChannel3 ch = noiseless_channel(2);
  RateVector w(2);
  w << 1.0, 1.0;
  RegionApprox f = optimize_region("thm1", ch, quick(), {w});
  CHECK(f.supports[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("worked product example: layered and single-auxiliary searches") {
  BroadcastChannel3 ch = make_bec_example();
  auto weights = default_weights(2, 61);
  RegionApprox thm1 = optimize_region("thm1", ch, quick(), weights);
  RegionApprox bzt = optimize_region("bzt", ch, quick(), weights);
  // the layered search supports the corner (1/2, 1/2)
  RateVector w(2);
  w << 1.0, 1.0;
  RegionApprox at_corner = optimize_region("thm1", ch, quick(), {w});
  CHECK(at_corner.supports[0] >= 1.0 - 0.02);
  // compare both searches against the closed forms at every weight
  RegionApprox cf_bzt = bec_frontier(BecKind::bzt, 0.02, weights);
  RegionApprox cf_cap = bec_frontier(BecKind::capacity, 0.02, weights);
  for (size_t i = 0; i < weights.size(); ++i) {
    CHECK(std::abs(thm1.supports[i] - cf_cap.supports[i]) < 0.02);
    CHECK(std::abs(bzt.supports[i] - cf_bzt.supports[i]) < 0.02);
  }
}

TEST_CASE("search is deterministic given the seed") {
  BroadcastChannel3 ch = make_bec_example();
  auto weights = default_weights(2, 13);
  SearchConfig cfg = quick();
  RegionApprox a = optimize_region("bzt", ch, cfg, weights);
  RegionApprox b = optimize_region("bzt", ch, cfg, weights);
  for (size_t i = 0; i < weights.size(); ++i) {
    CHECK(a.supports[i] == b.supports[i]);
    CHECK((a.argmax_points[i] - b.argmax_points[i]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("less-noisy channels: inner search with U3=U1 covers the outer search") {
  // Y3 degraded from Y1 makes receiver 1 less noisy than receiver 3; there the
  // two-message inner bound restricted to U3=U1 and the outer bound coincide,
  // so the searched supports must agree within desk tolerance.
  Rng rng(99);
  auto weights = default_weights(2, 13);
  for (int t = 0; t < 3; ++t) {
    BroadcastChannel3 ch = random_multilevel_channel(rng, 2, 2, 2, 2);
    SearchConfig cfg = quick();
    RegionApprox inner = optimize_prop5_u3u1(ch, cfg, weights);
    RegionApprox outer = optimize_region("prop6", ch, cfg, weights);
    for (size_t i = 0; i < weights.size(); ++i)
      CHECK(inner.supports[i] >= outer.supports[i] - 0.02);
  }
}

TEST_CASE("three-message search runs on triples") {
  BroadcastChannel3 ch = noiseless_channel(2);
  auto weights = default_weights(3, 16);
  SearchConfig cfg = quick();
  cfg.random_restarts = 8;
  RegionApprox f = optimize_region("thm2", ch, cfg, weights);
  CHECK(f.dim == 3);
  // sum rate R0+R1+R2 reaches log2|X| on the noiseless channel
  RateVector w(3);
  w << 1.0, 1.0, 1.0;
  RegionApprox s = optimize_region("thm2", ch, cfg, {w});
  CHECK(s.supports[0] >= 1.0 - 0.02);
}
