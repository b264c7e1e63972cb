#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "rrw/fme.hpp"

using namespace rrw;

namespace {

// order-insensitive canonical form (symbol names travel with the rows)
std::vector<std::string> canonical_rows(const SymbolicSystem& sys) {
  std::vector<std::string> out;
  for (const auto& row : sys.rows) out.push_back(normalized(row).str(sys.symbols));
  std::sort(out.begin(), out.end());
  return out;
}

int symbol_bearing_rows(const SymbolicSystem& sys) {
  int n = 0;
  for (const auto& row : sys.rows)
    if (!row.rhs.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("single elimination step of the binning bookkeeping") {
  SymbolicSystem sys;
  sys.variables = {"R0", "S2", "T2"};
  sys.add_row({{"S2", 1}, {"T2", -1}}, {});
  sys.add_row({{"R0", 1}, {"T2", 1}}, {{"I(U2;Y2)", 1}});
  SymbolicSystem out = eliminate(sys, "T2");
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].str(out.symbols) == "R0 + S2 <= I(U2;Y2)");
  CHECK(out.variables == std::vector<std::string>{"R0", "S2"});
  CHECK_THROWS_AS(eliminate(out, "T2"), ValidationError);
}

TEST_CASE("one-signed variables leave no combined rows") {
  SymbolicSystem sys;
  sys.variables = {"R0", "T"};
  sys.add_row({{"R0", 1}, {"T", 1}}, {{"A", 1}});   // T appears only positively
  sys.add_row({{"R0", 1}}, {{"B", 1}});
  SymbolicSystem out = eliminate(sys, "T");
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].str(out.symbols) == "R0 <= B");
}

TEST_CASE("row count after elimination is bounded by pos*neg + zero") {
  SymbolicSystem sys = with_nonneg_rows(build_named_system("prop5-raw"), {"S1", "S2", "S3"});
  for (const std::string& var : {"T2", "T3"}) {
    int pos = 0, neg = 0, zero = 0;
    for (const auto& row : sys.rows) {
      int s = row.coeff(var).sign();
      (s > 0 ? pos : s < 0 ? neg : zero)++;
    }
    SymbolicSystem next = eliminate(sys, var);
    CHECK(static_cast<int>(next.rows.size()) <= pos * neg + zero);
    sys = next;
  }
}

TEST_CASE("named systems transcribe with the stated shapes") {
  SymbolicSystem p5 = build_named_system("prop5-raw");
  CHECK(p5.rows.size() == 10);
  CHECK(symbol_bearing_rows(p5) == 8);
  CHECK(p5.variables == std::vector<std::string>{"R0", "S1", "S2", "S3", "T2", "T3"});
  SymbolicSystem t2 = build_named_system("thm2-raw");
  CHECK(t2.rows.size() == 11);
  CHECK(t2.variables == std::vector<std::string>{"R0", "R1", "S1", "S3", "T2", "T3"});
  SymbolicSystem ac = build_named_system("appC-equiv");
  CHECK(ac.rows.size() == 15);
  CHECK(ac.variables.size() == 8);
  SymbolicSystem r1z = build_named_system("appC-R1zero");
  CHECK(r1z.rows.size() == 15);
  CHECK(r1z.variables.size() == 7);
  CHECK_THROWS_AS(build_named_system("nope"), ValidationError);
}

TEST_CASE("derivation reproduces the two-message template numerically") {
  Derivation d = run_named_derivation("prop5-raw");
  CHECK(d.result.variables == std::vector<std::string>{"R0", "R1"});
  EquivReport rep = numeric_equiv(d.result, prop5_template(), sampler_for("prop5-raw"),
                                  200, 60, 42);
  INFO(rep.counterexample);
  CHECK(rep.equivalent);
  // the transcript's essential rows group into the six families of the target
  size_t mark = 0;
  for (size_t i = 0; i < d.transcript.size(); ++i)
    if (d.transcript[i].find("final system") != std::string::npos) mark = i;
  CHECK(d.transcript.size() - mark - 1 == 6);
  CHECK(d.transcript[mark].find("10 essential rows") != std::string::npos);
}

TEST_CASE("derivation reproduces the three-message template numerically") {
  Derivation d = run_named_derivation("thm2-raw");
  std::vector<std::string> vars = d.result.variables;
  std::sort(vars.begin(), vars.end());
  CHECK(vars == std::vector<std::string>{"R0", "R1", "R2"});
  EquivReport rep =
      numeric_equiv(d.result, thm2_template(), sampler_for("thm2-raw"), 200, 60, 43);
  INFO(rep.counterexample);
  CHECK(rep.equivalent);
}

TEST_CASE("middle-layer substitution collapses to the three-message system") {
  Substitution sub;
  sub.zero_vars = {"S2", "T22"};
  sub.var_renames = {{"T21", "T2"}};
  sub.symbol_map = {{"I(tU2;U3|U1)", "I(U2;U3|U1)"},
                    {"I(X;Y1|tU2)", "I(X;Y1|U2)"},
                    {"I(X;Y1|U3,tU2)", "I(X;Y1|U2,U3)"},
                    {"I(tU2;Y2|U1)", "I(U2;Y2|U1)"}};
  SymbolicSystem collapsed = substitute(build_named_system("appC-equiv"), sub);
  CHECK(canonical_rows(collapsed) == canonical_rows(build_named_system("thm2-raw")));
}

TEST_CASE("empty substitution is the identity") {
  SymbolicSystem sys = build_named_system("thm2-raw");
  SymbolicSystem same = substitute(sys, Substitution{});
  CHECK(canonical_rows(same) == canonical_rows(sys));
}

TEST_CASE("R1=0 system with the middle layer set to U1 matches the raw system") {
  Substitution sub;
  sub.symbol_map = {{"I(tU2;U3|U1)", std::nullopt},   // I(U1;U3|U1) = 0
                    {"I(tU2;Y2|U1)", std::nullopt},
                    {"I(X;Y1|tU2)", "I(X;Y1|U1)"},
                    {"I(X;Y1|U3,tU2)", "I(X;Y1|U3)"}};
  SymbolicSystem merged = substitute(build_named_system("appC-R1zero"), sub);
  // T21 is pinned to zero by its two rows; eliminate it and rename T22
  SymbolicSystem no_t21 = eliminate(merged, "T21");
  Substitution ren;
  ren.var_renames = {{"T22", "T2"}};
  SymbolicSystem named = substitute(no_t21, ren);
  EquivReport rep = numeric_equiv(named, build_named_system("prop5-raw"),
                                  sampler_for("appC-R1zero"), 150, 60, 44);
  INFO(rep.counterexample);
  CHECK(rep.equivalent);
}

TEST_CASE("elimination soundness: projections match one-dimensional feasibility") {
  SymbolicSystem prepared =
      introduce_sum_variable(with_nonneg_rows(build_named_system("prop5-raw"),
                                              {"S1", "S2", "S3"}),
                             "R1", {"S1", "S2", "S3"});
  for (const std::string& var : {"T2", "T3", "S2"}) {
    SymbolicSystem after = eliminate(prepared, var);
    std::vector<std::string> rest = after.variables;
    for (int t = 0; t < 200; ++t) {
      Rng rng(1000 + t);
      auto val = triple_symbol_valuation(rng);
      NumericSystem full = instantiate(prepared, val);
      NumericSystem proj = instantiate(after, val);
      for (int p = 0; p < 5; ++p) {
        Vec pt(static_cast<Index>(rest.size()));
        for (Index i = 0; i < pt.size(); ++i) pt(i) = rng.uniform() * 0.8;
        bool in_proj = violation(proj, pt) <= 1e-9;
        bool extends = extension_exists(full, var, pt, rest);
        CHECK(in_proj == extends);
      }
    }
    prepared = after;
  }
}

TEST_CASE("derivations are bit-identical across runs") {
  Derivation a = run_named_derivation("prop5-raw");
  Derivation b = run_named_derivation("prop5-raw");
  CHECK(system_str(a.result) == system_str(b.result));
  CHECK(a.transcript == b.transcript);
}

TEST_CASE("numeric_equiv flags a genuine difference") {
  SymbolicSystem a = prop5_template();
  SymbolicSystem b = prop5_template();
  b.rows.erase(b.rows.begin());  // drop R0 <= I(U2;Y2)
  EquivReport rep = numeric_equiv(a, b, sampler_for("prop5-raw"), 200, 100, 45);
  CHECK_FALSE(rep.equivalent);
  CHECK_FALSE(rep.counterexample.empty());
}

TEST_CASE("rationals stay exact") {
  Rational a(1, 3), b(1, 6);
  CHECK((a + b).str() == "1/2");
  CHECK((a - b).str() == "1/6");
  CHECK((a * b).str() == "1/18");
  CHECK((a / b).str() == "2");
  CHECK((-a).str() == "-1/3");
  CHECK(Rational(4, 8).str() == "1/2");
  CHECK(Rational(3, -6).str() == "-1/2");
}
