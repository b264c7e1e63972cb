#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "rrw/aux_dist.hpp"
#include "rrw/prob.hpp"

using namespace rrw;

namespace {

JointPmf joint2(std::initializer_list<double> cells, Index na, Index nb) {
  Vec flat(static_cast<Index>(cells.size()));
  Index i = 0;
  for (double c : cells) flat(i++) = c;
  return JointPmf({na, nb}, std::move(flat));
}

}  // namespace

TEST_CASE("entropy on simple pmfs") {
  CHECK(entropy(FinitePmf(Vec{{0.5, 0.5}})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy(FinitePmf(Vec{{1.0, 0.0}})) == doctest::Approx(0.0).epsilon(1e-12));
  // H(ap, 1-p, (1-a)p) = H(p,1-p) + p H(a,1-a) with p = a = 1/2
  CHECK(entropy(FinitePmf(Vec{{0.25, 0.5, 0.25}})) == doctest::Approx(1.5).epsilon(1e-12));
  double lhs = entropy(FinitePmf(Vec{{0.5, 0.5}})) + 0.5 * entropy(FinitePmf(Vec{{0.5, 0.5}}));
  CHECK(entropy(FinitePmf(Vec{{0.25, 0.5, 0.25}})) == doctest::Approx(lhs).epsilon(1e-12));
}

TEST_CASE("entropy bounds and validation") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    Index n = 2 + static_cast<Index>(rng.below(6));
    FinitePmf p = random_pmf(rng, n);
    double h = entropy(p);
    CHECK(h >= -1e-12);
    CHECK(h <= std::log2(double(n)) + 1e-9);
  }
  CHECK_THROWS_AS(FinitePmf(Vec{{0.5, 0.6}}), ValidationError);
  CHECK_THROWS_AS(FinitePmf(Vec{{1.5, -0.5}}), ValidationError);
}

TEST_CASE("mutual information on two-axis joints") {
  // independent uniform bits
  CHECK(mutual_information(joint2({0.25, 0.25, 0.25, 0.25}, 2, 2)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // identical uniform bits
  CHECK(mutual_information(joint2({0.5, 0.0, 0.0, 0.5}, 2, 2)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // uniform bit through an erasure channel with erasure probability 1/2:
  // direct summation over the 2x3 joint gives 0.5 bits
  JointPmf j = JointPmf::input_through(FinitePmf::uniform(2), bec_matrix(0.5));
  CHECK(mutual_information(j) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(mutual_information(JointPmf({2, 2, 2}, Vec::Constant(8, 0.125))),
                  DimensionError);
}

TEST_CASE("conditional mutual information") {
  // A independent of B given C for every c
  {
    Vec flat(8);
    Rng rng(3);
    double total = 0;
    std::vector<double> pa{0.3, 0.7}, pb{0.6, 0.4}, pc{0.2, 0.8};
    for (Index a = 0; a < 2; ++a)
      for (Index b = 0; b < 2; ++b)
        for (Index c = 0; c < 2; ++c) {
          flat((a * 2 + b) * 2 + c) = pa[a] * pb[b] * pc[c];
          total += flat((a * 2 + b) * 2 + c);
        }
    CHECK(total == doctest::Approx(1.0));
    CHECK(conditional_mi(JointPmf({2, 2, 2}, flat)) == doctest::Approx(0.0).epsilon(1e-12));
  }
  // constant C degenerates to plain mutual information
  {
    Rng rng(11);
    JointPmf ab = JointPmf::input_through(random_pmf(rng, 3), random_stochastic(rng, 3, 4));
    Vec flat(ab.cell_count());
    flat = ab.flat();
    JointPmf abc({3, 4, 1}, flat);
    CHECK(conditional_mi(abc) == doctest::Approx(mutual_information(ab)).epsilon(1e-9));
  }
  // chain rule cross-check I(A,C;B) = I(C;B) + I(A;B|C) on random 2x2x2 joints
  {
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
      FinitePmf p = random_pmf(rng, 8);
      JointPmf j({2, 2, 2}, p.probs());
      Index a[1] = {0}, b[1] = {1}, c[1] = {2};
      Index ac[2] = {0, 2};
      double lhs = mutual_information(j, ac, b);
      double rhs = mutual_information(j, c, b) + conditional_mi(j, a, b, c);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
  // direct-sum oracle: sum over c of p(c) I(A;B|C=c)
  {
    Rng rng(23);
    FinitePmf p = random_pmf(rng, 12);
    JointPmf j({2, 3, 2}, p.probs());
    double direct = 0.0;
    for (Index c = 0; c < 2; ++c) {
      double pc = 0.0;
      Mat slice = Mat::Zero(2, 3);
      for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 3; ++b) {
          slice(a, b) = j.flat()((a * 3 + b) * 2 + c);
          pc += slice(a, b);
        }
      if (pc < kZeroProb) continue;
      slice /= pc;
      Vec flat(6);
      for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 3; ++b) flat(a * 3 + b) = slice(a, b);
      direct += pc * mutual_information(JointPmf({2, 3}, flat));
    }
    CHECK(conditional_mi(j) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("compose_channels") {
  StochasticMatrix id3 = StochasticMatrix::identity(3);
  StochasticMatrix bec = bec_matrix(0.5);
  CHECK((compose_channels(bec, id3).matrix() - bec.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  // BEC(1/2) composed with the 1/3-2/3 degrading stage is BEC(5/6)
  Mat degrade(3, 3);
  degrade << 1.0 / 3, 2.0 / 3, 0,
             0, 1, 0,
             0, 2.0 / 3, 1.0 / 3;
  StochasticMatrix out = compose_channels(bec, StochasticMatrix(degrade));
  CHECK((out.matrix() - bec_matrix(5.0 / 6.0).matrix()).cwiseAbs().maxCoeff() < 1e-12);

  // erasure lift: BEC(a) then an erasure stage with parameter b
  auto lift = [](double b) {
    Mat m(3, 3);
    m << 1 - b, b, 0,
         0, 1, 0,
         0, b, 1 - b;
    return StochasticMatrix(m);
  };
  for (double a : {0.1, 0.4, 0.7})
    for (double b : {0.2, 0.5, 0.9}) {
      StochasticMatrix c = compose_channels(bec_matrix(a), lift(b));
      double erased = 1.0 - (1.0 - a) * (1.0 - b);
      CHECK(c(0, 1) == doctest::Approx(erased).epsilon(1e-12));
      CHECK(c(1, 1) == doctest::Approx(erased).epsilon(1e-12));
    }
  CHECK_THROWS_AS(compose_channels(bec, bec), DimensionError);
}

TEST_CASE("chain rule, symmetry, data processing, concavity") {
  Rng rng(41);
  for (int t = 0; t < 40; ++t) {
    FinitePmf px = random_pmf(rng, 3);
    StochasticMatrix ch = random_stochastic(rng, 3, 4);
    JointPmf j = JointPmf::input_through(px, ch);
    // H(A,B) = H(A) + H(B|A)
    double hb_given_a = 0.0;
    for (Index a = 0; a < 3; ++a) hb_given_a += px[a] * entropy(ch.row(a));
    CHECK(entropy(j) == doctest::Approx(entropy(px) + hb_given_a).epsilon(1e-9));
    // symmetry under transpose
    Index perm[2] = {1, 0};
    CHECK(mutual_information(j) ==
          doctest::Approx(mutual_information(j.permuted(perm))).epsilon(1e-9));
  }
  // data processing on composed chains A -> B -> C
  for (int t = 0; t < 40; ++t) {
    FinitePmf pa = random_pmf(rng, 3);
    StochasticMatrix ab = random_stochastic(rng, 3, 3);
    StochasticMatrix bc = random_stochastic(rng, 3, 3);
    double i_ab = mutual_information(JointPmf::input_through(pa, ab));
    double i_ac = mutual_information(JointPmf::input_through(pa, compose_channels(ab, bc)));
    CHECK(i_ac <= i_ab + 1e-9);
  }
  // concavity of entropy
  for (int t = 0; t < 40; ++t) {
    FinitePmf p = random_pmf(rng, 5);
    FinitePmf q = random_pmf(rng, 5);
    double lam = rng.uniform();
    FinitePmf mix(lam * p.probs() + (1 - lam) * q.probs());
    CHECK(entropy(mix) >= lam * entropy(p) + (1 - lam) * entropy(q) - 1e-9);
  }
}

TEST_CASE("marginals and permutation") {
  Rng rng(5);
  FinitePmf p = random_pmf(rng, 24);
  JointPmf j({2, 3, 4}, p.probs());
  Index keep[2] = {0, 2};
  JointPmf m = j.marginal(keep);
  CHECK(m.dims() == std::vector<Index>{2, 4});
  double direct = 0.0;
  for (Index b = 0; b < 3; ++b) direct += j.flat()(((1 * 3 + b) * 4) + 2);
  Index idx[2] = {1, 2};
  CHECK(m.at(idx) == doctest::Approx(direct).epsilon(1e-12));
  // every axis marginal is a valid pmf (constructor validates)
  for (Index ax = 0; ax < 3; ++ax) CHECK_NOTHROW(j.axis_pmf(ax));
}
