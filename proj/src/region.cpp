#include "rrw/region.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rrw {

namespace {

constexpr double kBox = 1e6;   // guard planes; hitting them means unbounded
constexpr double kFeasTol = 1e-9;
constexpr double kTieTol = 1e-12;

// All constraints as dense rows a.R <= b: user rows, nonnegativity, box guard.
struct DenseRows {
  std::vector<Eigen::Vector3d> a;
  std::vector<double> b;
  int dim;
  size_t user_rows;
};

DenseRows dense_rows(const RateConstraintSystem& sys) {
  if (sys.dim != 2 && sys.dim != 3) throw DimensionError("rate system: dim must be 2 or 3");
  DenseRows d;
  d.dim = sys.dim;
  for (const auto& row : sys.rows) {
    if (row.coeffs.size() != sys.dim)
      throw DimensionError("rate system: row arity does not match dim");
    if (row.coeffs.isZero()) throw ValidationError("rate system: all-zero row");
    Eigen::Vector3d a = Eigen::Vector3d::Zero();
    for (int i = 0; i < sys.dim; ++i) a(i) = row.coeffs(i);
    d.a.push_back(a);
    d.b.push_back(row.bound);
  }
  d.user_rows = d.a.size();
  for (int i = 0; i < sys.dim; ++i) {
    Eigen::Vector3d a = Eigen::Vector3d::Zero();
    a(i) = -1.0;
    d.a.push_back(a);
    d.b.push_back(0.0);
    a(i) = 1.0;
    d.a.push_back(a);
    d.b.push_back(kBox);
  }
  return d;
}

bool feasible(const DenseRows& d, const Eigen::Vector3d& p, double tol = kFeasTol) {
  for (size_t r = 0; r < d.a.size(); ++r)
    if (d.a[r].head(d.dim).dot(p.head(d.dim)) > d.b[r] + tol) return false;
  return true;
}

bool lex_greater(const Eigen::Vector3d& a, const Eigen::Vector3d& b, int dim) {
  for (int i = 0; i < dim; ++i) {
    if (a(i) > b(i) + kTieTol) return true;
    if (a(i) < b(i) - kTieTol) return false;
  }
  return false;
}

std::vector<Eigen::Vector3d> vertices_of(const DenseRows& d) {
  std::vector<Eigen::Vector3d> verts;
  size_t n = d.a.size();
  if (d.dim == 2) {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        double det = d.a[i](0) * d.a[j](1) - d.a[i](1) * d.a[j](0);
        if (std::abs(det) < 1e-12) continue;
        Eigen::Vector3d p = Eigen::Vector3d::Zero();
        p(0) = (d.b[i] * d.a[j](1) - d.b[j] * d.a[i](1)) / det;
        p(1) = (d.a[i](0) * d.b[j] - d.a[j](0) * d.b[i]) / det;
        if (feasible(d, p)) verts.push_back(p);
      }
  } else {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        for (size_t k = j + 1; k < n; ++k) {
          Eigen::Matrix3d A;
          A.row(0) = d.a[i];
          A.row(1) = d.a[j];
          A.row(2) = d.a[k];
          if (std::abs(A.determinant()) < 1e-12) continue;
          Eigen::Vector3d rhs(d.b[i], d.b[j], d.b[k]);
          Eigen::Vector3d p = A.partialPivLu().solve(rhs);
          if (feasible(d, p)) verts.push_back(p);
        }
  }
  return verts;
}

RateVector to_rate(const Eigen::Vector3d& p, int dim) {
  RateVector r(dim);
  for (int i = 0; i < dim; ++i) r(i) = std::max(0.0, p(i));
  return r;
}

}  // namespace

void RateConstraintSystem::add(std::initializer_list<int> coeffs, double bound) {
  LinearRateInequality row;
  row.coeffs.resize(static_cast<Index>(coeffs.size()));
  Index i = 0;
  for (int c : coeffs) row.coeffs(i++) = c;
  row.bound = bound;
  rows.push_back(std::move(row));
}

bool polytope_contains(const RateConstraintSystem& sys, const RateVector& pt, double tol) {
  if (pt.size() != sys.dim) throw DimensionError("polytope_contains: point arity mismatch");
  for (int i = 0; i < sys.dim; ++i)
    if (pt(i) < -tol) return false;
  for (const auto& row : sys.rows) {
    if (row.coeffs.size() != sys.dim)
      throw DimensionError("polytope_contains: row arity mismatch");
    double lhs = 0.0;
    for (int i = 0; i < sys.dim; ++i) lhs += row.coeffs(i) * pt(i);
    if (lhs > row.bound + tol) return false;
  }
  return true;
}

std::vector<RateVector> enumerate_vertices(const RateConstraintSystem& sys) {
  DenseRows d = dense_rows(sys);
  std::vector<RateVector> out;
  for (const auto& v : vertices_of(d)) {
    RateVector r = to_rate(v, sys.dim);
    bool dup = false;
    for (const auto& u : out)
      if ((u - r).cwiseAbs().maxCoeff() < 1e-9) { dup = true; break; }
    if (!dup) out.push_back(std::move(r));
  }
  return out;
}

WeightedOptimum max_weighted_rate(const RateConstraintSystem& sys, const RateVector& w) {
  if (w.size() != sys.dim) throw DimensionError("max_weighted_rate: weight arity mismatch");
  if (w.minCoeff() < 0.0 || w.maxCoeff() <= 0.0)
    throw ValidationError("max_weighted_rate: weights must be nonnegative and not all zero");
  DenseRows d = dense_rows(sys);
  auto verts = vertices_of(d);
  if (verts.empty()) throw GeometryError("max_weighted_rate: empty polytope");
  Eigen::Vector3d w3 = Eigen::Vector3d::Zero();
  for (int i = 0; i < sys.dim; ++i) w3(i) = w(i);
  bool have = false;
  double best = 0.0;
  Eigen::Vector3d arg = Eigen::Vector3d::Zero();
  for (const auto& v : verts) {
    double val = w3.dot(v);
    if (!have || val > best + kTieTol * std::max(1.0, std::abs(best)) ||
        (std::abs(val - best) <= kTieTol * std::max(1.0, std::abs(best)) &&
         lex_greater(v, arg, sys.dim))) {
      best = val;
      arg = v;
      have = true;
    }
  }
  if (arg.head(sys.dim).maxCoeff() > kBox - 1.0)
    throw GeometryError("max_weighted_rate: polytope unbounded in weight direction");
  return {best, to_rate(arg, sys.dim)};
}

RegionAccumulator::RegionAccumulator(std::vector<RateVector> weights, int dim)
    : dim_(dim), weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("RegionAccumulator: no weights");
  supports_.assign(weights_.size(), -1.0);
  args_.assign(weights_.size(), RateVector::Zero(dim_));
  tags_.assign(weights_.size(), -1);
}

void RegionAccumulator::add(const RateConstraintSystem& sys, std::int64_t tag) {
  if (sys.dim != dim_) throw DimensionError("RegionAccumulator: system dim mismatch");
  DenseRows d = dense_rows(sys);
  auto verts = vertices_of(d);
  if (verts.empty()) return;  // empty polytope contributes nothing
  for (size_t wi = 0; wi < weights_.size(); ++wi) {
    Eigen::Vector3d w3 = Eigen::Vector3d::Zero();
    for (int i = 0; i < dim_; ++i) w3(i) = weights_[wi](i);
    double best = -1.0;
    Eigen::Vector3d arg = Eigen::Vector3d::Zero();
    bool have = false;
    for (const auto& v : verts) {
      double val = w3.dot(v);
      if (!have || val > best + kTieTol * std::max(1.0, std::abs(best)) ||
          (std::abs(val - best) <= kTieTol * std::max(1.0, std::abs(best)) &&
           lex_greater(v, arg, dim_))) {
        best = val;
        arg = v;
        have = true;
      }
    }
    if (arg.head(dim_).maxCoeff() > kBox - 1.0)
      throw GeometryError("RegionAccumulator: unbounded polytope");
    RateVector cand = to_rate(arg, dim_);
    double tol = kTieTol * std::max(1.0, std::abs(best));
    Eigen::Vector3d cur3 = Eigen::Vector3d::Zero();
    for (int i = 0; i < dim_; ++i) cur3(i) = args_[wi](i);
    if (best > supports_[wi] + tol ||
        (std::abs(best - supports_[wi]) <= tol &&
         (lex_greater(arg, cur3, dim_) ||
          (!lex_greater(cur3, arg, dim_) && (tags_[wi] < 0 || (tag >= 0 && tag < tags_[wi])))))) {
      supports_[wi] = best;
      args_[wi] = cand;
      tags_[wi] = tag;
    }
  }
}

void RegionAccumulator::merge(const RegionAccumulator& other) {
  if (other.weights_.size() != weights_.size())
    throw DimensionError("RegionAccumulator::merge: weight sets differ");
  for (size_t wi = 0; wi < weights_.size(); ++wi) {
    double tol = kTieTol * std::max(1.0, std::abs(other.supports_[wi]));
    Eigen::Vector3d a = Eigen::Vector3d::Zero(), b = Eigen::Vector3d::Zero();
    for (int i = 0; i < dim_; ++i) {
      a(i) = other.args_[wi](i);
      b(i) = args_[wi](i);
    }
    if (other.supports_[wi] > supports_[wi] + tol ||
        (std::abs(other.supports_[wi] - supports_[wi]) <= tol &&
         (lex_greater(a, b, dim_) ||
          (!lex_greater(b, a, dim_) &&
           (tags_[wi] < 0 || (other.tags_[wi] >= 0 && other.tags_[wi] < tags_[wi])))))) {
      supports_[wi] = other.supports_[wi];
      args_[wi] = other.args_[wi];
      tags_[wi] = other.tags_[wi];
    }
  }
}

RegionApprox RegionAccumulator::finish() const {
  for (double s : supports_)
    if (s < 0.0) throw GeometryError("RegionAccumulator: no system was added");
  RegionApprox out;
  out.dim = dim_;
  out.weights = weights_;
  out.supports = supports_;
  out.argmax_points = args_;

  // Deduplicate argmax points and drop those strictly dominated by another.
  std::vector<RateVector> pts;
  for (const auto& p : args_) {
    bool dup = false;
    for (const auto& q : pts)
      if ((p - q).cwiseAbs().maxCoeff() < 1e-9) { dup = true; break; }
    if (!dup) pts.push_back(p);
  }
  std::vector<RateVector> kept;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& q : pts) {
      if (&p == &q) continue;
      bool all_le = true, some_lt = false;
      for (int i = 0; i < dim_; ++i) {
        if (p(i) > q(i) + 1e-9) all_le = false;
        if (p(i) < q(i) - 1e-6) some_lt = true;
      }
      if (all_le && some_lt) { dominated = true; break; }
    }
    if (!dominated) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(), [](const RateVector& a, const RateVector& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
  });
  out.boundary_points = std::move(kept);
  return out;
}

RegionApprox union_frontier(std::span<const RateConstraintSystem> systems,
                            const std::vector<RateVector>& weights) {
  if (systems.empty()) throw ValidationError("union_frontier: empty system stream");
  RegionAccumulator acc(weights, systems.front().dim);
  std::int64_t tag = 0;
  for (const auto& s : systems) acc.add(s, tag++);
  return acc.finish();
}

std::vector<RateVector> default_weights(int dim, int count) {
  std::vector<RateVector> w;
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      double theta = (std::numbers::pi / 2.0) * i / (count - 1);
      RateVector v(2);
      v << std::cos(theta), std::sin(theta);
      if (i == 0) v << 1.0, 0.0;
      if (i == count - 1) v << 0.0, 1.0;
      w.push_back(v);
    }
  } else if (dim == 3) {
    int g = std::max(2, static_cast<int>(std::round(std::sqrt(double(count)))));
    for (int i = 0; i <= g; ++i)
      for (int j = 0; j <= g; ++j) {
        double az = (std::numbers::pi / 2.0) * i / g;
        double el = (std::numbers::pi / 2.0) * j / g;
        RateVector v(3);
        v << std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el);
        for (int kdx = 0; kdx < 3; ++kdx)
          if (std::abs(v(kdx)) < 1e-15) v(kdx) = 0.0;
        if (v.maxCoeff() <= 0.0) continue;
        w.push_back(v);
      }
  } else {
    throw DimensionError("default_weights: dim must be 2 or 3");
  }
  return w;
}

std::vector<RateVector> frontier_vertices(const RegionApprox& approx, double collinear_tol) {
  if (approx.dim != 2) throw DimensionError("frontier_vertices: 2-D regions only");
  std::vector<RateVector> pts = approx.boundary_points;
  std::sort(pts.begin(), pts.end(), [](const RateVector& a, const RateVector& b) {
    if (a(0) != b(0)) return a(0) < b(0);
    return a(1) > b(1);
  });
  // Concave chain from (low R0, high R1) to (high R0, low R1); drop points on
  // or below the chord between their neighbors.
  std::vector<RateVector> chain;
  for (const auto& p : pts) {
    while (chain.size() >= 2) {
      const auto& a = chain[chain.size() - 2];
      const auto& b = chain[chain.size() - 1];
      double cross = (b(0) - a(0)) * (p(1) - a(1)) - (b(1) - a(1)) * (p(0) - a(0));
      if (cross >= -collinear_tol)
        chain.pop_back();  // b is under or on segment a-p
      else
        break;
    }
    chain.push_back(p);
  }
  return chain;
}

double support_slice_max(const RegionApprox& approx, double r0) {
  double best = std::numeric_limits<double>::infinity();
  int last = approx.dim - 1;
  for (size_t i = 0; i < approx.weights.size(); ++i) {
    const auto& w = approx.weights[i];
    if (w(last) <= 1e-12) continue;
    double head = 0.0;
    for (int k = 0; k < last; ++k) head += w(k) * r0;
    best = std::min(best, (approx.supports[i] - head) / w(last));
  }
  return best;
}

DominanceReport region_dominates(const RegionApprox& a, const RegionApprox& b,
                                 double margin) {
  if (a.dim != b.dim || a.weights.size() != b.weights.size())
    throw DimensionError("region_dominates: weight sets differ");
  for (size_t i = 0; i < a.weights.size(); ++i)
    if ((a.weights[i] - b.weights[i]).cwiseAbs().maxCoeff() > 1e-12)
      throw DimensionError("region_dominates: weight sets differ");
  DominanceReport rep;
  for (size_t i = 0; i < a.weights.size(); ++i) {
    double gap = a.supports[i] - b.supports[i];
    rep.max_gap = std::max(rep.max_gap, gap);
    rep.max_reverse_gap = std::max(rep.max_reverse_gap, -gap);
    if (gap > margin) {
      rep.exceed_idx.push_back(i);
      rep.a_dominates_somewhere = true;
    }
    if (-gap > margin) rep.b_never_exceeds = false;
  }
  return rep;
}

namespace {

std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string region_to_csv(const RegionApprox& approx) {
  std::ostringstream os;
  if (approx.dim == 2) {
    os << "weight_angle_deg,support,R0,R1\n";
    for (size_t i = 0; i < approx.weights.size(); ++i) {
      double ang = std::atan2(approx.weights[i](1), approx.weights[i](0)) * 180.0 /
                   std::numbers::pi;
      os << fmt_g9(ang) << ',' << fmt_g9(approx.supports[i]) << ','
         << fmt_g9(approx.argmax_points[i](0)) << ',' << fmt_g9(approx.argmax_points[i](1))
         << '\n';
    }
  } else {
    os << "w0,w1,w2,support,R0,R1,R2\n";
    for (size_t i = 0; i < approx.weights.size(); ++i) {
      os << fmt_g9(approx.weights[i](0)) << ',' << fmt_g9(approx.weights[i](1)) << ','
         << fmt_g9(approx.weights[i](2)) << ',' << fmt_g9(approx.supports[i]);
      for (int k = 0; k < 3; ++k) os << ',' << fmt_g9(approx.argmax_points[i](k));
      os << '\n';
    }
  }
  return os.str();
}

std::string region_to_json(const RegionApprox& approx) {
  std::ostringstream os;
  auto vec = [&](const RateVector& v) {
    std::string s = "[";
    for (int i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_g9(v(i));
    return s + "]";
  };
  os << "{\"dim\":" << approx.dim << ",\"entries\":[";
  for (size_t i = 0; i < approx.weights.size(); ++i) {
    if (i) os << ',';
    os << "{\"weight\":" << vec(approx.weights[i]) << ",\"support\":"
       << fmt_g9(approx.supports[i]) << ",\"point\":" << vec(approx.argmax_points[i]) << '}';
  }
  os << "],\"boundary_points\":[";
  for (size_t i = 0; i < approx.boundary_points.size(); ++i) {
    if (i) os << ',';
    os << vec(approx.boundary_points[i]);
  }
  os << "]}";
  return os.str();
}

}  // namespace rrw
