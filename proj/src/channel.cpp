#include "rrw/channel.hpp"

#include <cmath>

namespace rrw {

const char* to_string(ChannelStructure s) {
  switch (s) {
    case ChannelStructure::general: return "general";
    case ChannelStructure::multilevel: return "multilevel";
    case ChannelStructure::product_multilevel: return "product-multilevel";
    case ChannelStructure::deterministic: return "deterministic";
  }
  return "?";
}

ProductChannelSpec::ProductChannelSpec(StochasticMatrix x1_to_y21,
                                       StochasticMatrix y21_to_y11,
                                       StochasticMatrix y11_to_y31,
                                       StochasticMatrix x2_to_y12,
                                       StochasticMatrix y12_to_y32)
    : branch1{std::move(x1_to_y21), std::move(y21_to_y11), std::move(y11_to_y31)},
      branch2{std::move(x2_to_y12), std::move(y12_to_y32)} {
  if (branch1[0].cols() != branch1[1].rows() || branch1[1].cols() != branch1[2].rows())
    throw DimensionError("ProductChannelSpec: branch 1 stages do not compose");
  if (branch2[0].cols() != branch2[1].rows())
    throw DimensionError("ProductChannelSpec: branch 2 stages do not compose");
}

namespace {

bool is_deterministic_law(const Mat& law) {
  for (Index r = 0; r < law.rows(); ++r)
    for (Index c = 0; c < law.cols(); ++c) {
      double v = law(r, c);
      if (std::abs(v) > 1e-12 && std::abs(v - 1.0) > 1e-12) return false;
    }
  return true;
}

void check_law_rows(const Mat& law) {
  for (Index r = 0; r < law.rows(); ++r) {
    for (Index c = 0; c < law.cols(); ++c)
      if (!(law(r, c) >= -0.0) || std::isnan(law(r, c)))
        throw ValidationError("channel law: negative or NaN probability");
    double s = law.row(r).sum();
    if (std::abs(s - 1.0) > kProbTol)
      throw ValidationError("channel law: row " + std::to_string(r) + " sums to " +
                            std::to_string(s));
  }
}

}  // namespace

BroadcastChannel3 BroadcastChannel3::from_law(Index input_size,
                                              std::array<Index, 3> output_sizes,
                                              Mat law) {
  if (input_size <= 0 || output_sizes[0] <= 0 || output_sizes[1] <= 0 || output_sizes[2] <= 0)
    throw ValidationError("channel: alphabet sizes must be positive");
  if (law.rows() != input_size ||
      law.cols() != output_sizes[0] * output_sizes[1] * output_sizes[2])
    throw DimensionError("channel: law table does not match declared sizes");
  check_law_rows(law);
  ChannelStructure tag =
      is_deterministic_law(law) ? ChannelStructure::deterministic : ChannelStructure::general;
  BroadcastChannel3 ch(output_sizes, std::move(law), tag);
  if (tag == ChannelStructure::general) {
    if (auto q = multilevel_factor(ch)) {
      ch.tag_ = ChannelStructure::multilevel;
      ch.p_y3_given_y1_ = std::move(*q);
    }
  }
  return ch;
}

bool BroadcastChannel3::is_multilevel() const {
  if (tag_ == ChannelStructure::multilevel || tag_ == ChannelStructure::product_multilevel)
    return true;
  return multilevel_factor(*this).has_value();
}

StochasticMatrix BroadcastChannel3::receiver_marginal(int receiver) const {
  if (receiver < 1 || receiver > 3) throw DimensionError("receiver_marginal: receiver in 1..3");
  Index nk = ny_[static_cast<size_t>(receiver - 1)];
  Mat m = Mat::Zero(input_size(), nk);
  for (Index x = 0; x < input_size(); ++x)
    for (Index y1 = 0; y1 < ny_[0]; ++y1)
      for (Index y2 = 0; y2 < ny_[1]; ++y2)
        for (Index y3 = 0; y3 < ny_[2]; ++y3) {
          Index yk = receiver == 1 ? y1 : receiver == 2 ? y2 : y3;
          m(x, yk) += law_(x, flat_output(y1, y2, y3));
        }
  return StochasticMatrix(std::move(m));
}

BroadcastChannel3 build_multilevel(const Mat& p_y1y2_given_x, Index ny1, Index ny2,
                                   const StochasticMatrix& p_y3_given_y1) {
  if (p_y1y2_given_x.cols() != ny1 * ny2)
    throw DimensionError("build_multilevel: p(y1,y2|x) table does not match ny1*ny2");
  if (p_y3_given_y1.rows() != ny1)
    throw DimensionError("build_multilevel: p(y3|y1) rows must equal ny1");
  check_law_rows(p_y1y2_given_x);
  Index nx = p_y1y2_given_x.rows();
  Index ny3 = p_y3_given_y1.cols();
  Mat law = Mat::Zero(nx, ny1 * ny2 * ny3);
  for (Index x = 0; x < nx; ++x)
    for (Index y1 = 0; y1 < ny1; ++y1)
      for (Index y2 = 0; y2 < ny2; ++y2)
        for (Index y3 = 0; y3 < ny3; ++y3)
          law(x, (y1 * ny2 + y2) * ny3 + y3) =
              p_y1y2_given_x(x, y1 * ny2 + y2) * p_y3_given_y1(y1, y3);
  BroadcastChannel3 ch({ny1, ny2, ny3}, std::move(law),
                       is_deterministic_law(p_y1y2_given_x) && is_deterministic_law(p_y3_given_y1.matrix())
                           ? ChannelStructure::deterministic
                           : ChannelStructure::multilevel);
  ch.p_y3_given_y1_ = p_y3_given_y1.matrix();
  return ch;
}

BroadcastChannel3 build_product(const ProductChannelSpec& spec) {
  const Mat& a1 = spec.branch1[0].matrix();  // x1 -> y21
  const Mat& a2 = spec.branch1[1].matrix();  // y21 -> y11
  const Mat& a3 = spec.branch1[2].matrix();  // y11 -> y31
  const Mat& b1 = spec.branch2[0].matrix();  // x2 -> y12
  const Mat& b2 = spec.branch2[1].matrix();  // y12 -> y32

  Index nx1 = a1.rows(), ny21 = a1.cols(), ny11 = a2.cols(), ny31 = a3.cols();
  Index nx2 = b1.rows(), ny12 = b1.cols(), ny32 = b2.cols();

  Index nx = nx1 * nx2;
  Index ny1 = ny11 * ny12, ny2 = ny21, ny3 = ny31 * ny32;
  Mat law = Mat::Zero(nx, ny1 * ny2 * ny3);
  for (Index x1 = 0; x1 < nx1; ++x1)
    for (Index x2 = 0; x2 < nx2; ++x2) {
      Index x = x1 * nx2 + x2;
      for (Index y21 = 0; y21 < ny21; ++y21)
        for (Index y11 = 0; y11 < ny11; ++y11)
          for (Index y31 = 0; y31 < ny31; ++y31) {
            double pb1 = a1(x1, y21) * a2(y21, y11) * a3(y11, y31);
            if (pb1 == 0.0) continue;
            for (Index y12 = 0; y12 < ny12; ++y12)
              for (Index y32 = 0; y32 < ny32; ++y32) {
                double pb2 = b1(x2, y12) * b2(y12, y32);
                if (pb2 == 0.0) continue;
                Index y1 = y11 * ny12 + y12;
                Index y3 = y31 * ny32 + y32;
                law(x, (y1 * ny2 + y21) * ny3 + y3) += pb1 * pb2;
              }
          }
    }
  BroadcastChannel3 ch({ny1, ny2, ny3}, std::move(law), ChannelStructure::product_multilevel);
  ch.product_ = spec;
  return ch;
}

StochasticMatrix bec_matrix(double erasure) {
  if (erasure < 0.0 || erasure > 1.0) throw ValidationError("bec_matrix: erasure in [0,1]");
  Mat m(2, 3);
  m << 1.0 - erasure, erasure, 0.0,
       0.0, erasure, 1.0 - erasure;
  return StochasticMatrix(std::move(m));
}

BroadcastChannel3 make_bec_example() {
  StochasticMatrix id2 = StochasticMatrix::identity(2);
  Mat degrade(3, 3);
  // letters ordered 0, E, 1
  degrade << 1.0 / 3.0, 2.0 / 3.0, 0.0,
             0.0,       1.0,       0.0,
             0.0,       2.0 / 3.0, 1.0 / 3.0;
  return build_product(ProductChannelSpec(id2, bec_matrix(0.5),
                                          StochasticMatrix(std::move(degrade)), id2,
                                          bec_matrix(0.5)));
}

std::optional<Mat> multilevel_factor(const BroadcastChannel3& ch) {
  Index nx = ch.input_size();
  auto [ny1, ny2, ny3] = ch.output_sizes();
  const Mat& law = ch.law();

  // p(y1,y2|x) and a candidate p(y3|y1) read off any positive-mass context.
  Mat p12 = Mat::Zero(nx, ny1 * ny2);
  for (Index x = 0; x < nx; ++x)
    for (Index y1 = 0; y1 < ny1; ++y1)
      for (Index y2 = 0; y2 < ny2; ++y2)
        for (Index y3 = 0; y3 < ny3; ++y3)
          p12(x, y1 * ny2 + y2) += law(x, ch.flat_output(y1, y2, y3));

  Mat q = Mat::Zero(ny1, ny3);
  std::vector<bool> have(static_cast<size_t>(ny1), false);
  for (Index y1 = 0; y1 < ny1; ++y1) {
    for (Index x = 0; x < nx && !have[static_cast<size_t>(y1)]; ++x)
      for (Index y2 = 0; y2 < ny2; ++y2) {
        double mass = p12(x, y1 * ny2 + y2);
        if (mass > kZeroProb) {
          for (Index y3 = 0; y3 < ny3; ++y3)
            q(y1, y3) = law(x, ch.flat_output(y1, y2, y3)) / mass;
          have[static_cast<size_t>(y1)] = true;
          break;
        }
      }
    if (!have[static_cast<size_t>(y1)]) q(y1, 0) = 1.0;  // unreachable y1
  }

  for (Index x = 0; x < nx; ++x)
    for (Index y1 = 0; y1 < ny1; ++y1)
      for (Index y2 = 0; y2 < ny2; ++y2)
        for (Index y3 = 0; y3 < ny3; ++y3) {
          double lhs = law(x, ch.flat_output(y1, y2, y3));
          double rhs = p12(x, y1 * ny2 + y2) * q(y1, y3);
          if (std::abs(lhs - rhs) > kProbTol) return std::nullopt;
        }
  return q;
}

}  // namespace rrw
