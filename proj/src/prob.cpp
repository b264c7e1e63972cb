#include "rrw/prob.hpp"

#include <cmath>
#include <numeric>

namespace rrw {

namespace {

void check_mass(const Vec& p, const char* what) {
  for (Index i = 0; i < p.size(); ++i) {
    if (!(p(i) >= -0.0) || std::isnan(p(i)))
      throw ValidationError(std::string(what) + ": negative or NaN mass");
  }
  double s = p.sum();
  if (std::abs(s - 1.0) > kProbTol)
    throw ValidationError(std::string(what) + ": mass sums to " + std::to_string(s));
}

}  // namespace

FinitePmf::FinitePmf(Vec probs) : p_(std::move(probs)) {
  if (p_.size() == 0) throw ValidationError("FinitePmf: empty alphabet");
  check_mass(p_, "FinitePmf");
}

FinitePmf FinitePmf::uniform(Index n) {
  if (n <= 0) throw ValidationError("FinitePmf::uniform: n must be positive");
  return FinitePmf(Vec::Constant(n, 1.0 / static_cast<double>(n)));
}

FinitePmf FinitePmf::point_mass(Index n, Index i) {
  if (n <= 0 || i < 0 || i >= n) throw ValidationError("FinitePmf::point_mass: bad index");
  Vec p = Vec::Zero(n);
  p(i) = 1.0;
  return FinitePmf(std::move(p));
}

StochasticMatrix::StochasticMatrix(Mat m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.cols() == 0)
    throw ValidationError("StochasticMatrix: empty matrix");
  for (Index r = 0; r < m_.rows(); ++r) {
    for (Index c = 0; c < m_.cols(); ++c) {
      if (!(m_(r, c) >= -0.0) || std::isnan(m_(r, c)))
        throw ValidationError("StochasticMatrix: negative or NaN entry");
    }
    double s = m_.row(r).sum();
    if (std::abs(s - 1.0) > kProbTol)
      throw ValidationError("StochasticMatrix: row " + std::to_string(r) +
                            " sums to " + std::to_string(s));
  }
}

StochasticMatrix StochasticMatrix::identity(Index n) {
  return StochasticMatrix(Mat::Identity(n, n));
}

JointPmf::JointPmf(std::vector<Index> dims, Vec flat)
    : dims_(std::move(dims)), flat_(std::move(flat)) {
  if (dims_.empty()) throw ValidationError("JointPmf: no axes");
  Index cells = 1;
  for (Index d : dims_) {
    if (d <= 0) throw ValidationError("JointPmf: nonpositive axis size");
    cells *= d;
  }
  if (cells != flat_.size())
    throw DimensionError("JointPmf: table size does not match axis sizes");
  check_mass(flat_, "JointPmf");
}

JointPmf JointPmf::independent(const FinitePmf& pa, const FinitePmf& pb) {
  Vec flat(pa.size() * pb.size());
  for (Index a = 0; a < pa.size(); ++a)
    for (Index b = 0; b < pb.size(); ++b) flat(a * pb.size() + b) = pa[a] * pb[b];
  return JointPmf({pa.size(), pb.size()}, std::move(flat));
}

JointPmf JointPmf::input_through(const FinitePmf& px, const StochasticMatrix& ch) {
  if (px.size() != ch.rows())
    throw DimensionError("input_through: pmf size does not match channel rows");
  Vec flat(px.size() * ch.cols());
  for (Index x = 0; x < px.size(); ++x)
    for (Index y = 0; y < ch.cols(); ++y) flat(x * ch.cols() + y) = px[x] * ch(x, y);
  return JointPmf({px.size(), ch.cols()}, std::move(flat));
}

std::vector<Index> JointPmf::strides() const {
  std::vector<Index> s(dims_.size());
  Index acc = 1;
  for (size_t a = dims_.size(); a-- > 0;) {
    s[a] = acc;
    acc *= dims_[a];
  }
  return s;
}

double JointPmf::at(std::span<const Index> idx) const {
  if (static_cast<Index>(idx.size()) != axis_count())
    throw DimensionError("JointPmf::at: wrong index arity");
  auto st = strides();
  Index flat = 0;
  for (size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= dims_[a]) throw DimensionError("JointPmf::at: index out of range");
    flat += idx[a] * st[a];
  }
  return flat_(flat);
}

JointPmf JointPmf::marginal(std::span<const Index> keep) const {
  if (keep.empty()) throw DimensionError("JointPmf::marginal: no axes kept");
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= axis_count())
      throw DimensionError("JointPmf::marginal: axis out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw DimensionError("JointPmf::marginal: axes must be strictly increasing");
  }
  auto st = strides();
  std::vector<Index> odims(keep.size());
  std::vector<Index> ostride_of_axis(dims_.size(), 0);
  Index oacc = 1;
  for (size_t i = keep.size(); i-- > 0;) {
    odims[i] = dims_[static_cast<size_t>(keep[i])];
    ostride_of_axis[static_cast<size_t>(keep[i])] = oacc;
    oacc *= odims[i];
  }
  Vec out = Vec::Zero(oacc);

  // Odometer walk over all cells, tracking the output index incrementally.
  std::vector<Index> idx(dims_.size(), 0);
  Index oidx = 0;
  const Index cells = flat_.size();
  for (Index c = 0;;) {
    out(oidx) += flat_(c);
    if (++c == cells) break;
    for (size_t a = dims_.size(); a-- > 0;) {
      if (++idx[a] < dims_[a]) {
        oidx += ostride_of_axis[a];
        break;
      }
      idx[a] = 0;
      oidx -= ostride_of_axis[a] * (dims_[a] - 1);
    }
  }
  return JointPmf(std::move(odims), std::move(out));
}

FinitePmf JointPmf::axis_pmf(Index axis) const {
  Index a[1] = {axis};
  return FinitePmf(marginal(a).flat());
}

JointPmf JointPmf::permuted(std::span<const Index> perm) const {
  if (static_cast<Index>(perm.size()) != axis_count())
    throw DimensionError("JointPmf::permuted: wrong arity");
  auto st = strides();
  std::vector<Index> odims(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) odims[i] = dims_[static_cast<size_t>(perm[i])];
  std::vector<Index> ost(perm.size());
  Index acc = 1;
  for (size_t i = perm.size(); i-- > 0;) {
    ost[i] = acc;
    acc *= odims[i];
  }
  // in-stride per original axis as seen by the output layout
  std::vector<Index> ostride_of_axis(dims_.size(), 0);
  for (size_t i = 0; i < perm.size(); ++i) ostride_of_axis[static_cast<size_t>(perm[i])] = ost[i];

  Vec out(flat_.size());
  std::vector<Index> idx(dims_.size(), 0);
  Index oidx = 0;
  const Index cells = flat_.size();
  for (Index c = 0;;) {
    out(oidx) = flat_(c);
    if (++c == cells) break;
    for (size_t a = dims_.size(); a-- > 0;) {
      if (++idx[a] < dims_[a]) {
        oidx += ostride_of_axis[a];
        break;
      }
      idx[a] = 0;
      oidx -= ostride_of_axis[a] * (dims_[a] - 1);
    }
  }
  return JointPmf(std::move(odims), std::move(out));
}

double entropy(const Vec& raw) {
  double h = 0.0;
  for (Index i = 0; i < raw.size(); ++i) {
    double p = raw(i);
    if (p > kZeroProb) h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

double entropy(const FinitePmf& p) { return entropy(p.probs()); }

double entropy(const JointPmf& j) { return entropy(j.flat()); }

double entropy(const JointPmf& j, std::span<const Index> axes) {
  return entropy(j.marginal(axes).flat());
}

double clamp_information(double v) {
  if (v >= 0.0) return v;
  if (v >= -kMiSlack) return 0.0;
  throw InternalError("information quantity below numerical slack: " + std::to_string(v));
}

double mutual_information(const JointPmf& j, std::span<const Index> a,
                          std::span<const Index> b) {
  std::vector<Index> ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  std::sort(ab.begin(), ab.end());
  return clamp_information(entropy(j, a) + entropy(j, b) - entropy(j, ab));
}

double conditional_mi(const JointPmf& j, std::span<const Index> a,
                      std::span<const Index> b, std::span<const Index> c) {
  auto merge = [](std::span<const Index> u, std::span<const Index> v) {
    std::vector<Index> m(u.begin(), u.end());
    m.insert(m.end(), v.begin(), v.end());
    std::sort(m.begin(), m.end());
    return m;
  };
  std::vector<Index> ac = merge(a, c), bc = merge(b, c), abc = merge(merge(a, b), c);
  if (c.empty())
    return clamp_information(entropy(j, a) + entropy(j, b) - entropy(j, abc));
  return clamp_information(entropy(j, ac) + entropy(j, bc) - entropy(j, abc) -
                           entropy(j, std::span<const Index>(c)));
}

double mutual_information(const JointPmf& j) {
  if (j.axis_count() != 2) throw DimensionError("mutual_information: expected 2 axes");
  Index a[1] = {0}, b[1] = {1};
  return mutual_information(j, a, b);
}

double conditional_mi(const JointPmf& j) {
  if (j.axis_count() != 3) throw DimensionError("conditional_mi: expected 3 axes");
  Index a[1] = {0}, b[1] = {1}, c[1] = {2};
  return conditional_mi(j, a, b, c);
}

StochasticMatrix compose_channels(const StochasticMatrix& first,
                                  const StochasticMatrix& second) {
  if (first.cols() != second.rows())
    throw DimensionError("compose_channels: inner dimensions do not match");
  return StochasticMatrix(first.matrix() * second.matrix());
}

FinitePmf push_forward(const FinitePmf& p, const StochasticMatrix& ch) {
  if (p.size() != ch.rows())
    throw DimensionError("push_forward: pmf size does not match channel rows");
  return FinitePmf((p.probs().transpose() * ch.matrix()).transpose());
}

}  // namespace rrw
