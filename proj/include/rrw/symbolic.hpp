#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrw/rational.hpp"
#include "rrw/region.hpp"

namespace rrw {

// Registry of information-quantity identifiers ("I(U2;Y2)", ...). All symbols
// used here are mutual informations or conditional mutual informations, hence
// nonnegative; dominance pruning relies on exactly that fact.
class SymbolTable {
 public:
  int intern(const std::string& name);
  std::optional<int> find(const std::string& name) const;
  const std::string& name(int id) const { return names_[static_cast<size_t>(id)]; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

// Rational combination of symbols, canonical (no zero coefficients stored).
class SymbolicExpr {
 public:
  void add(int sym, const Rational& c);
  const std::map<int, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool all_coeffs_nonneg() const;
  double eval(const std::vector<double>& valuation) const;
  SymbolicExpr scaled(const Rational& c) const;
  friend SymbolicExpr operator+(const SymbolicExpr& a, const SymbolicExpr& b);
  friend SymbolicExpr operator-(const SymbolicExpr& a, const SymbolicExpr& b);
  friend bool operator==(const SymbolicExpr& a, const SymbolicExpr& b) {
    return a.terms_ == b.terms_;
  }
  std::string str(const SymbolTable& table) const;

 private:
  std::map<int, Rational> terms_;
};

// lhs(vars) <= rhs(symbols), sense fixed.
struct SymbolicInequality {
  std::map<std::string, Rational> lhs;
  SymbolicExpr rhs;

  bool lhs_empty() const { return lhs.empty(); }
  Rational coeff(const std::string& var) const;
  std::string str(const SymbolTable& table) const;
};

struct SymbolicSystem {
  SymbolTable symbols;
  std::vector<std::string> variables;  // ordered
  std::vector<SymbolicInequality> rows;

  bool has_variable(const std::string& v) const;
  // row builder: vars as (name, integer coeff), rhs as (symbol, integer coeff)
  void add_row(std::initializer_list<std::pair<const char*, long long>> vars,
               std::initializer_list<std::pair<const char*, long long>> rhs);
};

// Scale to a primitive integer row (positive factor only) for printing and
// duplicate detection.
SymbolicInequality normalized(const SymbolicInequality& row);

// Duplicate, tautology, and dominance cleanup (dominance holds under the
// all-symbols-nonnegative facts).
SymbolicSystem tidy_system(const SymbolicSystem& sys);

// Classical Fourier-Motzkin step: combine every (positive, negative) pair on
// `var` after scaling the coefficient to +-1, carry zero rows, then remove
// syntactic duplicates, tautologies, and rows dominated under the
// all-symbols-nonnegative facts.
SymbolicSystem eliminate(const SymbolicSystem& sys, const std::string& var);
SymbolicSystem eliminate_all(const SymbolicSystem& sys,
                             const std::vector<std::string>& vars);

struct Substitution {
  std::vector<std::string> zero_vars;                            // var := 0
  std::map<std::string, std::string> var_renames;                // var := other var
  std::map<std::string, std::optional<std::string>> symbol_map;  // sym := sym | 0
};

SymbolicSystem substitute(const SymbolicSystem& sys, const Substitution& sub);

// Rewrites parts[0] := new_var - parts[1] - ..., introducing new_var; the
// nonnegativity row of parts[0] becomes sum(parts[1:]) <= new_var.
SymbolicSystem introduce_sum_variable(const SymbolicSystem& sys, const std::string& new_var,
                                      const std::vector<std::string>& parts);

// Adds -v <= 0 rows for the named variables (explicit nonnegativity).
SymbolicSystem with_nonneg_rows(const SymbolicSystem& sys,
                                const std::vector<std::string>& vars);

// Numeric instantiation at a symbol valuation (by name; missing symbols are an
// error). Rows keep the system's variable order.
struct NumericSystem {
  std::vector<std::string> variables;
  Mat lhs;  // rows x vars
  Vec rhs;
};
NumericSystem instantiate(const SymbolicSystem& sys,
                          const std::map<std::string, double>& valuation);

// Greatest margin over rows of lhs.pt - rhs (<= 0 inside).
double violation(const NumericSystem& ns, const Vec& pt);

std::string system_str(const SymbolicSystem& sys);
// Rows grouped by identical lhs, printed as "lhs <= min{ rhs1, rhs2 }".
std::string system_str_grouped(const SymbolicSystem& sys,
                               const std::vector<bool>* redundant = nullptr);

}  // namespace rrw
