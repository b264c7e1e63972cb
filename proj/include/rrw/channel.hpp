#pragma once

#include <array>
#include <optional>

#include "rrw/prob.hpp"

namespace rrw {

enum class ChannelStructure { general, multilevel, product_multilevel, deterministic };

const char* to_string(ChannelStructure s);

// Factored product channel: branch 1 is the cascade X1 -> Y21 -> Y11 -> Y31,
// branch 2 is X2 -> Y12 -> Y32. Receiver 1 observes (Y11, Y12), receiver 2
// observes Y21 alone, receiver 3 observes (Y31, Y32).
struct ProductChannelSpec {
  std::array<StochasticMatrix, 3> branch1;
  std::array<StochasticMatrix, 2> branch2;

  ProductChannelSpec(StochasticMatrix x1_to_y21, StochasticMatrix y21_to_y11,
                     StochasticMatrix y11_to_y31, StochasticMatrix x2_to_y12,
                     StochasticMatrix y12_to_y32);
};

// Three-receiver broadcast channel p(y1, y2, y3 | x) as a dense table.
// Rows of law() index x; columns index (y1, y2, y3) with y3 fastest.
class BroadcastChannel3 {
 public:
  static BroadcastChannel3 from_law(Index input_size, std::array<Index, 3> output_sizes,
                                    Mat law);

  Index input_size() const { return law_.rows(); }
  const std::array<Index, 3>& output_sizes() const { return ny_; }
  const Mat& law() const { return law_; }
  ChannelStructure structure() const { return tag_; }

  // Multilevel means the law factors as p(y1,y2|x) p(y3|y1); product channels
  // are multilevel by construction.
  bool is_multilevel() const;
  const std::optional<ProductChannelSpec>& product_spec() const { return product_; }
  const std::optional<Mat>& y3_given_y1() const { return p_y3_given_y1_; }

  Index flat_output(Index y1, Index y2, Index y3) const {
    return (y1 * ny_[1] + y2) * ny_[2] + y3;
  }
  // p(yk | x) for receiver k in {1,2,3}
  StochasticMatrix receiver_marginal(int receiver) const;

  friend BroadcastChannel3 build_multilevel(const Mat&, Index, Index,
                                            const StochasticMatrix&);
  friend BroadcastChannel3 build_product(const ProductChannelSpec&);

 private:
  BroadcastChannel3(std::array<Index, 3> ny, Mat law, ChannelStructure tag)
      : ny_(ny), law_(std::move(law)), tag_(tag) {}

  std::array<Index, 3> ny_;
  Mat law_;
  ChannelStructure tag_;
  std::optional<ProductChannelSpec> product_;
  std::optional<Mat> p_y3_given_y1_;
};

// p_y1y2_given_x: rows x, columns (y1, y2) with y2 fastest.
BroadcastChannel3 build_multilevel(const Mat& p_y1y2_given_x, Index ny1, Index ny2,
                                   const StochasticMatrix& p_y3_given_y1);

BroadcastChannel3 build_product(const ProductChannelSpec& spec);

// Binary erasure kernel {0,1} -> {0,E,1} with the letter convention 0,E,1.
StochasticMatrix bec_matrix(double erasure);

// The worked product example: both branch inputs binary, Y21 = X1, Y12 = X2,
// BEC(1/2) stages to Y11 and Y32, and the 1/3-2/3 degrading stage Y11 -> Y31
// (so X1 -> Y31 is effectively BEC(5/6)).
BroadcastChannel3 make_bec_example();

// Attempts to factor a general law as p(y1,y2|x) p(y3|y1); returns the
// p(y3|y1) kernel when the factorization holds within kProbTol.
std::optional<Mat> multilevel_factor(const BroadcastChannel3& ch);

}  // namespace rrw
