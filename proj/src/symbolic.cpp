#include "rrw/symbolic.hpp"

#include <algorithm>
#include <sstream>

namespace rrw {

int SymbolTable::intern(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(names_.size());
  names_.push_back(name);
  index_[name] = id;
  return id;
}

std::optional<int> SymbolTable::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void SymbolicExpr::add(int sym, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(sym, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool SymbolicExpr::all_coeffs_nonneg() const {
  for (const auto& [s, c] : terms_)
    if (c.sign() < 0) return false;
  return true;
}

double SymbolicExpr::eval(const std::vector<double>& valuation) const {
  double v = 0.0;
  for (const auto& [s, c] : terms_) {
    if (s < 0 || s >= static_cast<int>(valuation.size()))
      throw InternalError("SymbolicExpr::eval: symbol without valuation");
    v += c.to_double() * valuation[static_cast<size_t>(s)];
  }
  return v;
}

SymbolicExpr SymbolicExpr::scaled(const Rational& c) const {
  SymbolicExpr out;
  if (c.is_zero()) return out;
  for (const auto& [s, coef] : terms_) out.terms_.emplace(s, coef * c);
  return out;
}

SymbolicExpr operator+(const SymbolicExpr& a, const SymbolicExpr& b) {
  SymbolicExpr out = a;
  for (const auto& [s, c] : b.terms_) out.add(s, c);
  return out;
}

SymbolicExpr operator-(const SymbolicExpr& a, const SymbolicExpr& b) {
  SymbolicExpr out = a;
  for (const auto& [s, c] : b.terms_) out.add(s, -c);
  return out;
}

std::string SymbolicExpr::str(const SymbolTable& table) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : terms_) {
    if (!first) os << (c.sign() >= 0 ? " + " : " - ");
    else if (c.sign() < 0) os << "-";
    Rational a = c.abs();
    if (!(a == Rational(1))) os << a.str() << " ";
    os << table.name(s);
    first = false;
  }
  return os.str();
}

Rational SymbolicInequality::coeff(const std::string& var) const {
  auto it = lhs.find(var);
  return it == lhs.end() ? Rational() : it->second;
}

std::string SymbolicInequality::str(const SymbolTable& table) const {
  std::ostringstream os;
  if (lhs.empty()) {
    os << "0";
  } else {
    bool first = true;
    for (const auto& [v, c] : lhs) {
      if (!first) os << (c.sign() >= 0 ? " + " : " - ");
      else if (c.sign() < 0) os << "-";
      Rational a = c.abs();
      if (!(a == Rational(1))) os << a.str() << " ";
      os << v;
      first = false;
    }
  }
  os << " <= " << rhs.str(table);
  return os.str();
}

bool SymbolicSystem::has_variable(const std::string& v) const {
  return std::find(variables.begin(), variables.end(), v) != variables.end();
}

void SymbolicSystem::add_row(std::initializer_list<std::pair<const char*, long long>> vars,
                             std::initializer_list<std::pair<const char*, long long>> rhs) {
  SymbolicInequality row;
  for (const auto& [v, c] : vars) {
    if (c == 0) continue;
    if (!has_variable(v)) variables.push_back(v);
    row.lhs[v] = Rational(c);
  }
  for (const auto& [s, c] : rhs) row.rhs.add(symbols.intern(s), Rational(c));
  rows.push_back(std::move(row));
}

SymbolicInequality normalized(const SymbolicInequality& row) {
  // positive scale making every coefficient integral with gcd 1
  long long lcm = 1;
  auto fold = [&](const Rational& c) {
    lcm = std::lcm(lcm, c.den());
  };
  for (const auto& [v, c] : row.lhs) fold(c);
  for (const auto& [s, c] : row.rhs.terms()) fold(c);
  long long g = 0;
  auto gfold = [&](const Rational& c) {
    long long n = c.num() * (lcm / c.den());
    g = std::gcd(g, n < 0 ? -n : n);
  };
  for (const auto& [v, c] : row.lhs) gfold(c);
  for (const auto& [s, c] : row.rhs.terms()) gfold(c);
  if (g == 0) g = 1;
  Rational scale(lcm, g);
  SymbolicInequality out;
  for (const auto& [v, c] : row.lhs) out.lhs[v] = c * scale;
  out.rhs = row.rhs.scaled(scale);
  return out;
}

namespace {

std::string row_key(const SymbolicInequality& row) {
  std::ostringstream os;
  for (const auto& [v, c] : row.lhs) os << v << ':' << c.str() << ';';
  os << '|';
  for (const auto& [s, c] : row.rhs.terms()) os << s << ':' << c.str() << ';';
  return os.str();
}

// duplicate, tautology, and nonneg-symbol dominance cleanup
std::vector<SymbolicInequality> tidy(std::vector<SymbolicInequality> rows) {
  std::vector<SymbolicInequality> norm;
  norm.reserve(rows.size());
  std::vector<std::string> keys;
  for (auto& r : rows) {
    SymbolicInequality n = normalized(r);
    // tautology: 0 <= nonneg combination
    if (n.lhs_empty() && n.rhs.all_coeffs_nonneg()) continue;
    std::string key = row_key(n);
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
    keys.push_back(std::move(key));
    norm.push_back(std::move(n));
  }
  // dominance: identical lhs, rhs difference a nonnegative symbol combination
  std::vector<bool> drop(norm.size(), false);
  for (size_t i = 0; i < norm.size(); ++i) {
    if (drop[i]) continue;
    for (size_t j = 0; j < norm.size(); ++j) {
      if (i == j || drop[j] || drop[i]) continue;
      if (norm[i].lhs != norm[j].lhs) continue;
      SymbolicExpr diff = norm[j].rhs - norm[i].rhs;
      if (!diff.empty() && diff.all_coeffs_nonneg()) drop[j] = true;  // j weaker
    }
  }
  std::vector<SymbolicInequality> out;
  for (size_t i = 0; i < norm.size(); ++i)
    if (!drop[i]) out.push_back(std::move(norm[i]));
  return out;
}

}  // namespace

SymbolicSystem tidy_system(const SymbolicSystem& sys) {
  SymbolicSystem out = sys;
  out.rows = tidy(out.rows);
  return out;
}

SymbolicSystem eliminate(const SymbolicSystem& sys, const std::string& var) {
  if (!sys.has_variable(var))
    throw ValidationError("eliminate: unknown variable " + var);
  std::vector<SymbolicInequality> pos, neg, zero;
  for (const auto& row : sys.rows) {
    Rational c = row.coeff(var);
    if (c.is_zero()) {
      zero.push_back(row);
      continue;
    }
    // scale to coefficient +-1 on var
    SymbolicInequality scaled;
    Rational inv = Rational(1) / c.abs();
    for (const auto& [v, cc] : row.lhs) {
      if (v == var) continue;
      scaled.lhs[v] = cc * inv;
    }
    scaled.rhs = row.rhs.scaled(inv);
    (c.sign() > 0 ? pos : neg).push_back(std::move(scaled));
  }
  std::vector<SymbolicInequality> out = zero;
  for (const auto& p : pos)
    for (const auto& n : neg) {
      // (var + P <= rp) + (-var + N <= rn)  =>  P + N <= rp + rn
      SymbolicInequality comb;
      comb.lhs = p.lhs;
      for (const auto& [v, c] : n.lhs) {
        auto [it, fresh] = comb.lhs.try_emplace(v, c);
        if (!fresh) {
          it->second = it->second + c;
          if (it->second.is_zero()) comb.lhs.erase(it);
        }
      }
      comb.rhs = p.rhs + n.rhs;
      out.push_back(std::move(comb));
    }
  SymbolicSystem res;
  res.symbols = sys.symbols;
  for (const auto& v : sys.variables)
    if (v != var) res.variables.push_back(v);
  res.rows = tidy(std::move(out));
  return res;
}

SymbolicSystem eliminate_all(const SymbolicSystem& sys,
                             const std::vector<std::string>& vars) {
  SymbolicSystem cur = sys;
  for (const auto& v : vars) cur = eliminate(cur, v);
  return cur;
}

SymbolicSystem substitute(const SymbolicSystem& sys, const Substitution& sub) {
  for (const auto& v : sub.zero_vars)
    if (!sys.has_variable(v)) throw ValidationError("substitute: unknown variable " + v);
  for (const auto& [from, to] : sub.var_renames)
    if (!sys.has_variable(from)) throw ValidationError("substitute: unknown variable " + from);
  for (const auto& [from, to] : sub.symbol_map)
    if (!sys.symbols.find(from)) throw ValidationError("substitute: unknown symbol " + from);

  SymbolicSystem res;
  // variable list after zeroing/renames
  for (const auto& v : sys.variables) {
    if (std::find(sub.zero_vars.begin(), sub.zero_vars.end(), v) != sub.zero_vars.end())
      continue;
    std::string name = v;
    auto it = sub.var_renames.find(v);
    if (it != sub.var_renames.end()) name = it->second;
    if (!res.has_variable(name)) res.variables.push_back(name);
  }
  // symbol mapping table
  for (const auto& row : sys.rows) {
    SymbolicInequality nrow;
    for (const auto& [v, c] : row.lhs) {
      if (std::find(sub.zero_vars.begin(), sub.zero_vars.end(), v) != sub.zero_vars.end())
        continue;
      std::string name = v;
      auto it = sub.var_renames.find(v);
      if (it != sub.var_renames.end()) name = it->second;
      auto [jt, fresh] = nrow.lhs.try_emplace(name, c);
      if (!fresh) {
        jt->second = jt->second + c;
        if (jt->second.is_zero()) nrow.lhs.erase(jt);
      }
    }
    for (const auto& [sid, c] : row.rhs.terms()) {
      const std::string& sname = sys.symbols.name(sid);
      auto it = sub.symbol_map.find(sname);
      if (it == sub.symbol_map.end()) {
        nrow.rhs.add(res.symbols.intern(sname), c);
      } else if (it->second.has_value()) {
        nrow.rhs.add(res.symbols.intern(*it->second), c);
      }  // mapped to zero: dropped
    }
    res.rows.push_back(std::move(nrow));
  }
  return tidy_system(res);
}

SymbolicSystem introduce_sum_variable(const SymbolicSystem& sys, const std::string& new_var,
                                      const std::vector<std::string>& parts) {
  if (parts.empty()) throw ValidationError("introduce_sum_variable: no parts");
  for (const auto& p : parts)
    if (!sys.has_variable(p))
      throw ValidationError("introduce_sum_variable: unknown variable " + p);
  if (sys.has_variable(new_var))
    throw ValidationError("introduce_sum_variable: variable exists: " + new_var);
  const std::string& head = parts.front();
  SymbolicSystem res;
  res.symbols = sys.symbols;
  for (const auto& v : sys.variables) {
    if (v == head) res.variables.push_back(new_var);
    else res.variables.push_back(v);
  }
  for (const auto& row : sys.rows) {
    SymbolicInequality nrow;
    nrow.rhs = row.rhs;
    Rational chead = row.coeff(head);
    auto bump = [&](const std::string& v, const Rational& c) {
      if (c.is_zero()) return;
      auto [it, fresh] = nrow.lhs.try_emplace(v, c);
      if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) nrow.lhs.erase(it);
      }
    };
    for (const auto& [v, c] : row.lhs)
      if (v != head) bump(v, c);
    if (!chead.is_zero()) {
      bump(new_var, chead);
      for (size_t i = 1; i < parts.size(); ++i) bump(parts[i], -chead);
    }
    res.rows.push_back(std::move(nrow));
  }
  return res;
}

SymbolicSystem with_nonneg_rows(const SymbolicSystem& sys,
                                const std::vector<std::string>& vars) {
  SymbolicSystem res = sys;
  for (const auto& v : vars) {
    if (!res.has_variable(v)) res.variables.push_back(v);
    SymbolicInequality row;
    row.lhs[v] = Rational(-1);
    res.rows.push_back(std::move(row));
  }
  return res;
}

NumericSystem instantiate(const SymbolicSystem& sys,
                          const std::map<std::string, double>& valuation) {
  std::vector<double> vals(static_cast<size_t>(sys.symbols.size()), 0.0);
  for (int s = 0; s < sys.symbols.size(); ++s) {
    auto it = valuation.find(sys.symbols.name(s));
    if (it == valuation.end())
      throw ValidationError("instantiate: no valuation for symbol " + sys.symbols.name(s));
    vals[static_cast<size_t>(s)] = it->second;
  }
  NumericSystem ns;
  ns.variables = sys.variables;
  ns.lhs = Mat::Zero(static_cast<Index>(sys.rows.size()), static_cast<Index>(sys.variables.size()));
  ns.rhs = Vec::Zero(static_cast<Index>(sys.rows.size()));
  for (size_t r = 0; r < sys.rows.size(); ++r) {
    for (size_t v = 0; v < sys.variables.size(); ++v)
      ns.lhs(static_cast<Index>(r), static_cast<Index>(v)) =
          sys.rows[r].coeff(sys.variables[v]).to_double();
    ns.rhs(static_cast<Index>(r)) = sys.rows[r].rhs.eval(vals);
  }
  return ns;
}

double violation(const NumericSystem& ns, const Vec& pt) {
  if (pt.size() != static_cast<Index>(ns.variables.size()))
    throw DimensionError("violation: point arity mismatch");
  if (ns.lhs.rows() == 0) return -std::numeric_limits<double>::infinity();
  return (ns.lhs * pt - ns.rhs).maxCoeff();
}

std::string system_str(const SymbolicSystem& sys) {
  std::ostringstream os;
  for (const auto& row : sys.rows) os << row.str(sys.symbols) << '\n';
  return os.str();
}

std::string system_str_grouped(const SymbolicSystem& sys, const std::vector<bool>* redundant) {
  // group by identical lhs, preserving first-appearance order
  std::vector<std::string> order;
  std::map<std::string, std::vector<size_t>> groups;
  std::map<std::string, std::string> lhs_text;
  for (size_t r = 0; r < sys.rows.size(); ++r) {
    if (redundant && (*redundant)[r]) continue;
    std::ostringstream key;
    for (const auto& [v, c] : sys.rows[r].lhs) key << v << ':' << c.str() << ';';
    if (!groups.count(key.str())) {
      order.push_back(key.str());
      std::ostringstream lt;
      if (sys.rows[r].lhs.empty()) {
        lt << "0";
      } else {
        bool first = true;
        for (const auto& [v, c] : sys.rows[r].lhs) {
          if (!first) lt << (c.sign() >= 0 ? " + " : " - ");
          else if (c.sign() < 0) lt << "-";
          Rational a = c.abs();
          if (!(a == Rational(1))) lt << a.str() << " ";
          lt << v;
          first = false;
        }
      }
      lhs_text[key.str()] = lt.str();
    }
    groups[key.str()].push_back(r);
  }
  std::ostringstream os;
  for (const auto& key : order) {
    const auto& rows = groups[key];
    os << lhs_text[key] << " <= ";
    if (rows.size() == 1) {
      os << sys.rows[rows[0]].rhs.str(sys.symbols);
    } else {
      os << "min{ ";
      for (size_t i = 0; i < rows.size(); ++i)
        os << (i ? ", " : "") << sys.rows[rows[i]].rhs.str(sys.symbols);
      os << " }";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace rrw
