#include "rrw/fme.hpp"

#include <algorithm>
#include <sstream>

#include "rrw/aux_dist.hpp"

namespace rrw {

SymbolicSystem build_named_system(const std::string& id) {
  SymbolicSystem s;
  if (id == "prop5-raw") {
    s.variables = {"R0", "S1", "S2", "S3", "T2", "T3"};
    s.add_row({{"S2", 1}, {"T2", -1}}, {});
    s.add_row({{"S3", 1}, {"T3", -1}}, {});
    s.add_row({{"S2", 1}, {"S3", 1}, {"T2", -1}, {"T3", -1}}, {{"I(U2;U3|U1)", -1}});
    s.add_row({{"R0", 1}, {"S1", 1}, {"S2", 1}, {"S3", 1}}, {{"I(X;Y1)", 1}});
    s.add_row({{"S1", 1}, {"S2", 1}, {"S3", 1}}, {{"I(X;Y1|U1)", 1}});
    s.add_row({{"S1", 1}, {"S3", 1}}, {{"I(X;Y1|U2)", 1}});
    s.add_row({{"S1", 1}, {"S2", 1}}, {{"I(X;Y1|U3)", 1}});
    s.add_row({{"S1", 1}}, {{"I(X;Y1|U2,U3)", 1}});
    s.add_row({{"R0", 1}, {"T2", 1}}, {{"I(U2;Y2)", 1}});
    s.add_row({{"R0", 1}, {"T3", 1}}, {{"I(U3;Y3)", 1}});
    return s;
  }
  if (id == "thm2-raw") {
    s.variables = {"R0", "R1", "S1", "S3", "T2", "T3"};
    s.add_row({{"R1", 1}, {"T2", -1}}, {});
    s.add_row({{"S3", 1}, {"T3", -1}}, {});
    s.add_row({{"R1", 1}, {"S3", 1}, {"T2", -1}, {"T3", -1}}, {{"I(U2;U3|U1)", -1}});
    s.add_row({{"R0", 1}, {"S1", 1}, {"R1", 1}, {"S3", 1}}, {{"I(X;Y1)", 1}});
    s.add_row({{"S1", 1}, {"S3", 1}}, {{"I(X;Y1|U2)", 1}});
    s.add_row({{"S1", 1}, {"R1", 1}}, {{"I(X;Y1|U3)", 1}});
    s.add_row({{"S1", 1}, {"R1", 1}, {"S3", 1}}, {{"I(X;Y1|U1)", 1}});
    s.add_row({{"S1", 1}}, {{"I(X;Y1|U2,U3)", 1}});
    s.add_row({{"R0", 1}, {"T2", 1}}, {{"I(U2;Y2)", 1}});
    s.add_row({{"T2", 1}}, {{"I(U2;Y2|U1)", 1}});
    s.add_row({{"R0", 1}, {"T3", 1}}, {{"I(U3;Y3)", 1}});
    return s;
  }
  if (id == "appC-equiv") {
    s.variables = {"R0", "R1", "S1", "S2", "S3", "T21", "T22", "T3"};
    s.add_row({{"R1", 1}, {"T21", -1}}, {});
    s.add_row({{"S2", 1}, {"T22", -1}}, {});
    s.add_row({{"S3", 1}, {"T3", -1}}, {});
    s.add_row({{"R1", 1}, {"S3", 1}, {"T21", -1}, {"T3", -1}}, {{"I(tU2;U3|U1)", -1}});
    s.add_row({{"R1", 1}, {"S2", 1}, {"S3", 1}, {"T21", -1}, {"T22", -1}, {"T3", -1}},
              {{"I(U2;U3|U1)", -1}});
    s.add_row({{"R0", 1}, {"S1", 1}, {"R1", 1}, {"S2", 1}, {"S3", 1}}, {{"I(X;Y1)", 1}});
    s.add_row({{"S1", 1}, {"R1", 1}, {"S2", 1}, {"S3", 1}}, {{"I(X;Y1|U1)", 1}});
    s.add_row({{"S1", 1}, {"S2", 1}, {"S3", 1}}, {{"I(X;Y1|tU2)", 1}});
    s.add_row({{"S1", 1}, {"S3", 1}}, {{"I(X;Y1|U2)", 1}});
    s.add_row({{"S1", 1}, {"R1", 1}, {"S2", 1}}, {{"I(X;Y1|U3)", 1}});
    s.add_row({{"S1", 1}, {"S2", 1}}, {{"I(X;Y1|U3,tU2)", 1}});
    s.add_row({{"S1", 1}}, {{"I(X;Y1|U2,U3)", 1}});
    s.add_row({{"R0", 1}, {"T21", 1}, {"T22", 1}}, {{"I(U2;Y2)", 1}});
    s.add_row({{"T21", 1}}, {{"I(tU2;Y2|U1)", 1}});
    s.add_row({{"R0", 1}, {"T3", 1}}, {{"I(U3;Y3)", 1}});
    return s;
  }
  if (id == "appC-R1zero") {
    s.variables = {"R0", "S1", "S2", "S3", "T21", "T22", "T3"};
    s.add_row({{"T21", -1}}, {});
    s.add_row({{"S2", 1}, {"T22", -1}}, {});
    s.add_row({{"S3", 1}, {"T3", -1}}, {});
    s.add_row({{"S3", 1}, {"T21", -1}, {"T3", -1}}, {{"I(tU2;U3|U1)", -1}});
    s.add_row({{"S2", 1}, {"S3", 1}, {"T21", -1}, {"T22", -1}, {"T3", -1}},
              {{"I(U2;U3|U1)", -1}});
    s.add_row({{"S1", 1}, {"S2", 1}, {"S3", 1}}, {{"I(X;Y1|tU2)", 1}});
    s.add_row({{"R0", 1}, {"S1", 1}, {"S2", 1}, {"S3", 1}}, {{"I(X;Y1)", 1}});
    s.add_row({{"S1", 1}, {"S2", 1}, {"S3", 1}}, {{"I(X;Y1|U1)", 1}});
    s.add_row({{"S1", 1}, {"S3", 1}}, {{"I(X;Y1|U2)", 1}});
    s.add_row({{"S1", 1}, {"S2", 1}}, {{"I(X;Y1|U3)", 1}});
    s.add_row({{"S1", 1}, {"S2", 1}}, {{"I(X;Y1|U3,tU2)", 1}});
    s.add_row({{"S1", 1}}, {{"I(X;Y1|U2,U3)", 1}});
    s.add_row({{"R0", 1}, {"T21", 1}, {"T22", 1}}, {{"I(U2;Y2)", 1}});
    s.add_row({{"T21", 1}}, {{"I(tU2;Y2|U1)", 1}});
    s.add_row({{"R0", 1}, {"T3", 1}}, {{"I(U3;Y3)", 1}});
    return s;
  }
  throw ValidationError("build_named_system: unknown id " + id);
}

SymbolicSystem prop5_template() {
  SymbolicSystem s;
  s.variables = {"R0", "R1"};
  s.add_row({{"R0", 1}}, {{"I(U2;Y2)", 1}});
  s.add_row({{"R0", 1}}, {{"I(U3;Y3)", 1}});
  s.add_row({{"R0", 2}}, {{"I(U2;Y2)", 1}, {"I(U3;Y3)", 1}, {"I(U2;U3|U1)", -1}});
  s.add_row({{"R1", 1}}, {{"I(X;Y1|U2)", 1}, {"I(X;Y1|U3)", 1}});
  s.add_row({{"R1", 1}}, {{"I(X;Y1|U1)", 1}});
  s.add_row({{"R0", 1}, {"R1", 1}}, {{"I(X;Y1)", 1}});
  s.add_row({{"R0", 1}, {"R1", 1}}, {{"I(U2;Y2)", 1}, {"I(X;Y1|U2)", 1}});
  s.add_row({{"R0", 1}, {"R1", 1}}, {{"I(U3;Y3)", 1}, {"I(X;Y1|U3)", 1}});
  s.add_row({{"R0", 2}, {"R1", 1}},
            {{"I(U2;Y2)", 1}, {"I(U3;Y3)", 1}, {"I(X;Y1|U2,U3)", 1}, {"I(U2;U3|U1)", -1}});
  s.add_row({{"R0", 2}, {"R1", 2}},
            {{"I(U2;Y2)", 1}, {"I(X;Y1|U2)", 1}, {"I(U3;Y3)", 1}, {"I(X;Y1|U3)", 1},
             {"I(U2;U3|U1)", -1}});
  return s;
}

SymbolicSystem thm2_template() {
  SymbolicSystem s;
  s.variables = {"R0", "R1", "R2"};
  s.add_row({{"R0", 1}}, {{"I(U3;Y3)", 1}});
  s.add_row({{"R1", 1}}, {{"I(U2;Y2|U1)", 1}});
  s.add_row({{"R1", 1}}, {{"I(X;Y1|U3)", 1}});
  s.add_row({{"R2", 1}}, {{"I(X;Y1|U2)", 1}});
  s.add_row({{"R0", 1}, {"R1", 1}}, {{"I(U2;Y2)", 1}});
  s.add_row({{"R0", 1}, {"R1", 1}},
            {{"I(U2;Y2|U1)", 1}, {"I(U3;Y3)", 1}, {"I(U2;U3|U1)", -1}});
  s.add_row({{"R0", 2}, {"R1", 1}}, {{"I(U2;Y2)", 1}, {"I(U3;Y3)", 1}, {"I(U2;U3|U1)", -1}});
  s.add_row({{"R0", 1}, {"R2", 1}}, {{"I(U3;Y3)", 1}, {"I(X;Y1|U2,U3)", 1}});
  s.add_row({{"R1", 1}, {"R2", 1}}, {{"I(X;Y1|U1)", 1}});
  s.add_row({{"R0", 1}, {"R1", 1}, {"R2", 1}}, {{"I(X;Y1)", 1}});
  s.add_row({{"R0", 1}, {"R1", 1}, {"R2", 1}}, {{"I(U3;Y3)", 1}, {"I(X;Y1|U3)", 1}});
  s.add_row({{"R0", 1}, {"R1", 1}, {"R2", 1}},
            {{"I(U2;Y2|U1)", 1}, {"I(U3;Y3)", 1}, {"I(X;Y1|U2,U3)", 1}, {"I(U2;U3|U1)", -1}});
  s.add_row({{"R0", 2}, {"R1", 1}, {"R2", 1}},
            {{"I(U2;Y2)", 1}, {"I(U3;Y3)", 1}, {"I(X;Y1|U2,U3)", 1}, {"I(U2;U3|U1)", -1}});
  s.add_row({{"R0", 1}, {"R1", 2}, {"R2", 1}},
            {{"I(U2;Y2|U1)", 1}, {"I(U3;Y3)", 1}, {"I(X;Y1|U3)", 1}, {"I(U2;U3|U1)", -1}});
  s.add_row({{"R0", 2}, {"R1", 2}, {"R2", 1}},
            {{"I(U2;Y2)", 1}, {"I(U3;Y3)", 1}, {"I(X;Y1|U3)", 1}, {"I(U2;U3|U1)", -1}});
  return s;
}

namespace {

using Axes = std::initializer_list<Index>;

double jmi(const JointPmf& j, Axes a, Axes b) {
  return mutual_information(j, std::span<const Index>(a.begin(), a.size()),
                            std::span<const Index>(b.begin(), b.size()));
}

double jcmi(const JointPmf& j, Axes a, Axes b, Axes c) {
  return conditional_mi(j, std::span<const Index>(a.begin(), a.size()),
                        std::span<const Index>(b.begin(), b.size()),
                        std::span<const Index>(c.begin(), c.size()));
}

}  // namespace

std::map<std::string, double> triple_symbol_valuation(Rng& rng) {
  // Valuations come from genuine (channel, triple) pairs. The family sweeps
  // per-receiver channel quality, (v2, v3) correlation, and how strongly each
  // satellite layer pins x, so that every constraint family gets cut
  // witnesses among the samples.
  auto degrade = [&](const Mat& m, double lam) -> Mat {
    return lam * m + (1 - lam) * Mat::Constant(m.rows(), m.cols(), 1.0 / double(m.cols()));
  };
  Mat law(2, 8);
  {
    Mat m1 = degrade(random_stochastic(rng, 2, 2).matrix(), rng.uniform());
    Mat m2 = degrade(random_stochastic(rng, 2, 2).matrix(), rng.uniform());
    Mat m3 = degrade(random_stochastic(rng, 2, 2).matrix(), rng.uniform());
    for (Index x = 0; x < 2; ++x)
      for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b)
          for (Index c = 0; c < 2; ++c)
            law(x, (a * 2 + b) * 2 + c) = m1(x, a) * m2(x, b) * m3(x, c);
  }
  BroadcastChannel3 ch = BroadcastChannel3::from_law(2, {2, 2, 2}, law);

  AuxTriple aux = [&]() -> AuxTriple {
    if (rng.below(6) == 0) return random_triple(rng, 2, 2, 1, 2);  // U3 = U1
    double rho = rng.uniform();  // (v2, v3) coupling
    Mat pvv(2, 4);
    for (Index u = 0; u < 2; ++u) {
      FinitePmf d = random_pmf(rng, 2);
      FinitePmf e = random_pmf(rng, 2);
      for (Index v2 = 0; v2 < 2; ++v2)
        for (Index v3 = 0; v3 < 2; ++v3)
          pvv(u, v2 * 2 + v3) =
              rho * (v2 == v3 ? d[v2] : 0.0) + (1 - rho) * d[v2] * e[v3];
    }
    double l2 = rng.uniform(), l3 = rng.uniform() * (1 - l2);
    Mat px(8, 2);
    for (Index r = 0; r < 8; ++r) {
      Index v2 = (r / 2) % 2, v3 = r % 2;
      FinitePmf g = random_pmf(rng, 2);
      for (Index x = 0; x < 2; ++x)
        px(r, x) = l2 * (x == v2 ? 1.0 : 0.0) + l3 * (x == v3 ? 1.0 : 0.0) +
                   (1 - l2 - l3) * g[x];
    }
    return AuxTriple(random_pmf(rng, 2), 2, 2, StochasticMatrix(pvv),
                     StochasticMatrix(px));
  }();
  JointPmf j = aux_channel_joint(aux, ch);  // (U1,V2,V3,X,Y1,Y2,Y3)
  std::map<std::string, double> v;
  v["I(U2;Y2)"] = jmi(j, {0, 1}, {5});
  v["I(U2;Y2|U1)"] = jcmi(j, {1}, {5}, {0});
  v["I(U3;Y3)"] = jmi(j, {0, 2}, {6});
  v["I(U2;U3|U1)"] = jcmi(j, {1}, {2}, {0});
  v["I(X;Y1)"] = jmi(j, {3}, {4});
  v["I(X;Y1|U1)"] = jcmi(j, {3}, {4}, {0});
  v["I(X;Y1|U2)"] = jcmi(j, {3}, {4}, {0, 1});
  v["I(X;Y1|U3)"] = jcmi(j, {3}, {4}, {0, 2});
  v["I(X;Y1|U2,U3)"] = jcmi(j, {3}, {4}, {0, 1, 2});
  return v;
}

std::map<std::string, double> extended_symbol_valuation(Rng& rng) {
  // Embedding tU2 = (U1, Wt), U2 = (U1, Wt, W2), U3 = (U1, V3); any joint over
  // (U1, Wt, W2, V3, X) realizes the double Markov structure.
  BroadcastChannel3 ch = random_channel(rng, 2, 2, 2, 2);
  FinitePmf pu1 = random_pmf(rng, 2);
  StochasticMatrix cond = random_stochastic(rng, 2, 16);  // (wt,w2,v3,x) given u1
  Mat pre(16, 2);
  for (Index u1 = 0; u1 < 2; ++u1)
    for (Index k = 0; k < 16; ++k) {
      Index x = k % 2;
      pre(u1 * 8 + k / 2, x) = pu1[u1] * cond(u1, k);
    }
  // prefix axes (U1, Wt, W2, V3) then X and channel outputs
  std::vector<Index> dims = {2, 2, 2, 2, 2, 2, 2, 2};
  Vec flat(256);
  for (Index p = 0; p < 16; ++p)
    for (Index x = 0; x < 2; ++x)
      flat.segment((p * 2 + x) * 8, 8) = pre(p, x) * ch.law().row(x).transpose();
  JointPmf j(dims, std::move(flat));  // (U1,Wt,W2,V3,X,Y1,Y2,Y3)
  std::map<std::string, double> v;
  v["I(U2;Y2)"] = jmi(j, {0, 1, 2}, {6});
  v["I(U2;Y2|U1)"] = jcmi(j, {1, 2}, {6}, {0});
  v["I(tU2;Y2|U1)"] = jcmi(j, {1}, {6}, {0});
  v["I(U3;Y3)"] = jmi(j, {0, 3}, {7});
  v["I(U2;U3|U1)"] = jcmi(j, {1, 2}, {3}, {0});
  v["I(tU2;U3|U1)"] = jcmi(j, {1}, {3}, {0});
  v["I(X;Y1)"] = jmi(j, {4}, {5});
  v["I(X;Y1|U1)"] = jcmi(j, {4}, {5}, {0});
  v["I(X;Y1|tU2)"] = jcmi(j, {4}, {5}, {0, 1});
  v["I(X;Y1|U2)"] = jcmi(j, {4}, {5}, {0, 1, 2});
  v["I(X;Y1|U3)"] = jcmi(j, {4}, {5}, {0, 3});
  v["I(X;Y1|U3,tU2)"] = jcmi(j, {4}, {5}, {0, 1, 3});
  v["I(X;Y1|U2,U3)"] = jcmi(j, {4}, {5}, {0, 1, 2, 3});
  return v;
}

ValuationSampler sampler_for(const std::string& system_id) {
  if (system_id == "appC-equiv" || system_id == "appC-R1zero")
    return [](Rng& rng) { return extended_symbol_valuation(rng); };
  return [](Rng& rng) { return triple_symbol_valuation(rng); };
}

namespace {

// lhs matrices aligned to a shared variable order
struct Aligned {
  std::vector<std::string> vars;
  NumericSystem a, b;
};

Aligned align(const SymbolicSystem& a, const SymbolicSystem& b,
              const std::map<std::string, double>& valuation) {
  std::vector<std::string> vars = a.variables;
  for (const auto& v : b.variables)
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  auto inst = [&](const SymbolicSystem& s) {
    NumericSystem raw = instantiate(s, valuation);
    NumericSystem out;
    out.variables = vars;
    out.lhs = Mat::Zero(raw.lhs.rows(), static_cast<Index>(vars.size()));
    out.rhs = raw.rhs;
    for (size_t v = 0; v < raw.variables.size(); ++v) {
      auto pos = std::find(vars.begin(), vars.end(), raw.variables[v]) - vars.begin();
      out.lhs.col(pos) = raw.lhs.col(static_cast<Index>(v));
    }
    return out;
  };
  return {vars, inst(a), inst(b)};
}

}  // namespace

EquivReport numeric_equiv(const SymbolicSystem& a, const SymbolicSystem& b,
                          const ValuationSampler& sampler, int trials,
                          int points_per_trial, std::uint64_t seed) {
  {
    std::vector<std::string> va = a.variables, vb = b.variables;
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    if (va != vb) throw ValidationError("numeric_equiv: systems have different free variables");
  }
  EquivReport rep;
  rep.trials = trials;
  constexpr double kGuard = 1e-7;
  for (int t = 0; t < trials && rep.equivalent; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    auto valuation = sampler(rng);
    Aligned al = align(a, b, valuation);
    Index nv = static_cast<Index>(al.vars.size());
    double scale = std::max({1.0, al.a.rhs.size() ? al.a.rhs.maxCoeff() : 1.0,
                             al.b.rhs.size() ? al.b.rhs.maxCoeff() : 1.0});
    Index rows_a = al.a.lhs.rows(), rows_b = al.b.lhs.rows();
    for (int p = 0; p < points_per_trial; ++p) {
      Vec pt(nv);
      if (p % 2 == 0) {
        for (Index i = 0; i < nv; ++i) pt(i) = rng.uniform() * 1.3 * scale;
      } else {
        // straddle a boundary: scale a box point onto each row's hyperplane in
        // turn, with jitter to land on both sides
        for (Index i = 0; i < nv; ++i) pt(i) = rng.uniform() * scale;
        Index which = (p / 2) % std::max<Index>(1, rows_a + rows_b);
        const NumericSystem& ns = which < rows_a ? al.a : al.b;
        Index r = which < rows_a ? which : which - rows_a;
        if (ns.lhs.rows() > 0) {
          double lhs = ns.lhs.row(r).dot(pt);
          if (lhs > 1e-9 && ns.rhs(r) > 1e-9)
            pt *= ns.rhs(r) / lhs * (0.97 + 0.06 * rng.uniform());
        }
      }
      double va = violation(al.a, pt);
      double vb = violation(al.b, pt);
      if (std::abs(va) <= kGuard || std::abs(vb) <= kGuard) continue;  // too close to call
      ++rep.points;
      if ((va < 0) != (vb < 0)) {
        rep.equivalent = false;
        std::ostringstream os;
        os << "trial " << t << ": point (";
        for (Index i = 0; i < nv; ++i) os << (i ? "," : "") << pt(i);
        os << ") margin_a=" << va << " margin_b=" << vb;
        rep.counterexample = os.str();
        break;
      }
    }
  }
  return rep;
}

namespace {

// Integer-coefficient rate system from numeric rows; nullopt when a row does
// not convert (coefficients too wild for the dim<=3 vertex LP path).
std::optional<RateConstraintSystem> to_rate_system(const SymbolicSystem& sys,
                                                   const std::map<std::string, double>& val,
                                                   size_t skip_row) {
  if (sys.variables.size() > 3) return std::nullopt;
  RateConstraintSystem rs;
  rs.dim = static_cast<int>(sys.variables.size());
  NumericSystem ns = instantiate(sys, val);
  for (size_t r = 0; r < sys.rows.size(); ++r) {
    if (r == skip_row) continue;
    long long lcm = 1;
    for (const auto& [v, c] : sys.rows[r].lhs) lcm = std::lcm(lcm, c.den());
    LinearRateInequality row;
    row.coeffs = Eigen::VectorXi::Zero(rs.dim);
    for (int v = 0; v < rs.dim; ++v) {
      Rational c = sys.rows[r].coeff(sys.variables[static_cast<size_t>(v)]);
      long long ic = c.num() * (lcm / c.den());
      if (std::abs(ic) > 1000000) return std::nullopt;
      row.coeffs(v) = static_cast<int>(ic);
    }
    if (row.coeffs.isZero()) continue;
    row.bound = ns.rhs(static_cast<Index>(r)) * static_cast<double>(lcm);
    rs.rows.push_back(std::move(row));
  }
  return rs;
}

}  // namespace

std::vector<bool> flag_redundant_rows(const SymbolicSystem& sys,
                                      const ValuationSampler& sampler, int valuations,
                                      std::uint64_t seed) {
  std::vector<bool> redundant(sys.rows.size(), true);
  for (size_t r = 0; r < sys.rows.size(); ++r) {
    bool all_nonpos = true;
    for (const auto& [v, c] : sys.rows[r].lhs)
      if (c.sign() > 0) all_nonpos = false;
    if (all_nonpos && sys.rows[r].rhs.all_coeffs_nonneg()) continue;  // never cuts R >= 0
    if (sys.variables.size() > 3) {
      redundant[r] = false;
      continue;
    }
    bool neg_coeff = false;
    for (const auto& [v, c] : sys.rows[r].lhs)
      if (c.sign() < 0) neg_coeff = true;
    if (neg_coeff) {
      redundant[r] = false;  // not certified by the nonnegative-weight LP
      continue;
    }
    for (int t = 0; t < valuations && redundant[r]; ++t) {
      Rng rng(seed, 0xf1a6ULL * (t + 1));
      auto val = sampler(rng);
      auto rs = to_rate_system(sys, val, r);
      if (!rs) { redundant[r] = false; break; }
      RateVector w(rs->dim);
      long long lcm = 1;
      for (const auto& [v, c] : sys.rows[r].lhs) lcm = std::lcm(lcm, c.den());
      for (int v = 0; v < rs->dim; ++v)
        w(v) = sys.rows[r].coeff(sys.variables[static_cast<size_t>(v)]).to_double() *
               static_cast<double>(lcm);
      NumericSystem ns = instantiate(sys, val);
      double bound = ns.rhs(static_cast<Index>(r)) * static_cast<double>(lcm);
      auto verts = enumerate_vertices(*rs);
      if (verts.empty()) continue;  // empty region at this valuation: no cut to observe
      double mx = 0.0;
      bool unbounded = false;
      for (const auto& v : verts) {
        mx = std::max(mx, w.dot(v));
        if (v.maxCoeff() > 1e6 - 1.0) unbounded = true;
      }
      if (unbounded || mx > bound + 1e-9) redundant[r] = false;
    }
  }
  return redundant;
}

Derivation run_named_derivation(const std::string& id,
                                std::vector<std::string> eliminate_order) {
  Derivation d;
  SymbolicSystem sys = build_named_system(id);
  d.transcript.push_back("system " + id + ": " + std::to_string(sys.rows.size()) + " rows");
  if (id == "prop5-raw") {
    sys = with_nonneg_rows(sys, {"S1", "S2", "S3"});
    d.transcript.push_back("added nonnegativity rows for S1, S2, S3");
    sys = introduce_sum_variable(sys, "R1", {"S1", "S2", "S3"});
    d.transcript.push_back("introduced R1 = S1 + S2 + S3");
    if (eliminate_order.empty()) eliminate_order = {"T2", "T3", "S2", "S3"};
  } else if (id == "thm2-raw") {
    sys = with_nonneg_rows(sys, {"S1", "S3"});
    d.transcript.push_back("added nonnegativity rows for S1, S3");
    sys = introduce_sum_variable(sys, "R2", {"S1", "S3"});
    d.transcript.push_back("introduced R2 = S1 + S3");
    if (eliminate_order.empty()) eliminate_order = {"S3", "T2", "T3"};
  } else if (id == "appC-equiv" || id == "appC-R1zero") {
    sys = with_nonneg_rows(sys, {"S1", "S2", "S3"});
    d.transcript.push_back("added nonnegativity rows for S1, S2, S3");
  }
  d.input = sys;
  for (const auto& v : eliminate_order) {
    size_t before = sys.rows.size();
    sys = eliminate(sys, v);
    d.transcript.push_back("eliminated " + v + ": " + std::to_string(before) + " -> " +
                           std::to_string(sys.rows.size()) + " rows");
  }
  d.result = sys;
  auto redundant = flag_redundant_rows(sys, sampler_for(id), 400, 0xACCE55);
  size_t kept = 0;
  for (bool b : redundant)
    if (!b) ++kept;
  d.transcript.push_back("final system (" + std::to_string(kept) + " essential rows, " +
                         std::to_string(sys.rows.size() - kept) +
                         " numerically redundant):");
  std::istringstream grouped(system_str_grouped(sys, &redundant));
  for (std::string line; std::getline(grouped, line);) d.transcript.push_back("  " + line);
  return d;
}

bool extension_exists(const NumericSystem& ns, const std::string& var, const Vec& others,
                      const std::vector<std::string>& other_order) {
  auto vit = std::find(ns.variables.begin(), ns.variables.end(), var);
  if (vit == ns.variables.end()) throw ValidationError("extension_exists: unknown variable");
  Index vcol = vit - ns.variables.begin();
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Index r = 0; r < ns.lhs.rows(); ++r) {
    double c = ns.lhs(r, vcol);
    double rest = -ns.rhs(r);
    for (size_t o = 0; o < other_order.size(); ++o) {
      auto oit = std::find(ns.variables.begin(), ns.variables.end(), other_order[o]);
      if (oit == ns.variables.end()) throw ValidationError("extension_exists: variable mismatch");
      Index ocol = oit - ns.variables.begin();
      if (ocol == vcol) continue;
      rest += ns.lhs(r, ocol) * others(static_cast<Index>(o));
    }
    // rest + c * v <= 0
    if (std::abs(c) < 1e-12) {
      if (rest > 1e-9) return false;
    } else if (c > 0) {
      hi = std::min(hi, -rest / c);
    } else {
      lo = std::max(lo, -rest / c);
    }
  }
  return lo <= hi + 1e-9;
}

std::string system_to_json(const SymbolicSystem& sys) {
  std::ostringstream os;
  os << "{\"variables\":[";
  for (size_t i = 0; i < sys.variables.size(); ++i)
    os << (i ? "," : "") << '"' << sys.variables[i] << '"';
  os << "],\"rows\":[";
  for (size_t r = 0; r < sys.rows.size(); ++r) {
    if (r) os << ',';
    os << "{\"lhs\":{";
    bool first = true;
    for (const auto& [v, c] : sys.rows[r].lhs) {
      if (!first) os << ',';
      os << '"' << v << "\":\"" << c.str() << '"';
      first = false;
    }
    os << "},\"rhs\":{";
    first = true;
    for (const auto& [s, c] : sys.rows[r].rhs.terms()) {
      if (!first) os << ',';
      os << '"' << sys.symbols.name(s) << "\":\"" << c.str() << '"';
      first = false;
    }
    os << "},\"text\":\"" << sys.rows[r].str(sys.symbols) << "\"}";
  }
  os << "]}";
  return os.str();
}

}  // namespace rrw
