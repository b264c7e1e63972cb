#include "rrw/sim.hpp"

#include <algorithm>
#include <cmath>

#include "rrw/parallel.hpp"

namespace rrw {

namespace {

std::int64_t count_of(double rate, Index n) {
  return static_cast<std::int64_t>(std::ceil(std::exp2(rate * static_cast<double>(n)) - 1e-9));
}

Index draw_from(const Vec& cdf, double u) {
  Index lo = 0, hi = cdf.size() - 1;
  while (lo < hi) {
    Index mid = (lo + hi) / 2;
    if (u <= cdf(mid)) hi = mid; else lo = mid + 1;
  }
  return lo;
}

Vec cumulative(const Vec& p) {
  Vec c(p.size());
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    c(i) = acc;
  }
  c(p.size() - 1) = 1.0;
  return c;
}

// worst multiplicative deviation of pair counts from the model
double pair_deviation(const Word& a, const Word& b, const Mat& joint) {
  const Index na = joint.rows(), nb = joint.cols();
  std::vector<std::int32_t> counts(static_cast<size_t>(na * nb), 0);
  const double n = static_cast<double>(a.size());
  for (size_t i = 0; i < a.size(); ++i) counts[static_cast<size_t>(a[i]) * nb + b[i]]++;
  double worst = 0.0;
  for (Index r = 0; r < na; ++r)
    for (Index c = 0; c < nb; ++c) {
      double q = joint(r, c);
      double f = counts[static_cast<size_t>(r * nb + c)] / n;
      if (q <= kZeroProb) {
        if (f > 0.0) return std::numeric_limits<double>::infinity();
      } else {
        worst = std::max(worst, std::abs(f - q) / q);
      }
    }
  return worst;
}

double single_deviation(const Word& w, const Vec& probs) {
  std::vector<std::int32_t> counts(static_cast<size_t>(probs.size()), 0);
  for (std::uint8_t c : w) counts[c]++;
  const double n = static_cast<double>(w.size());
  double worst = 0.0;
  for (Index i = 0; i < probs.size(); ++i) {
    double q = probs(i);
    double f = counts[static_cast<size_t>(i)] / n;
    if (q <= kZeroProb) {
      if (f > 0.0) return std::numeric_limits<double>::infinity();
    } else {
      worst = std::max(worst, std::abs(f - q) / q);
    }
  }
  return worst;
}

constexpr int kRejectionBudget = 1000;

}  // namespace

bool typical_word(const Word& w, const Vec& probs, double eps) {
  return single_deviation(w, probs) <= eps;
}

bool jointly_typical(const Word& a, const Word& b, const Mat& joint, double eps) {
  return pair_deviation(a, b, joint) <= eps;
}

void CodeSpec::validate() const {
  if (!channel.is_multilevel())
    throw ValidationError("CodeSpec: the scheme runs on multilevel channels");
  if (aux.p_x_given_u2.cols() != channel.input_size())
    throw DimensionError("CodeSpec: auxiliary chain does not match the channel input");
  if (r0 < 0 || s1 < 0 || s2 < 0) throw ValidationError("CodeSpec: rates must be nonnegative");
  if (n < 1) throw ValidationError("CodeSpec: blocklength must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ValidationError("CodeSpec: epsilon must lie in (0, 0.5)");
  for (double rate : {r0, s1, s2})
    if (rate * static_cast<double>(n) > 40.0)
      throw ValidationError(
          "CodeSpec: n*rate exceeds 40 bits; the codeword count does not fit");
}

std::int64_t CodeSpec::m0_count() const { return count_of(r0, n); }
std::int64_t CodeSpec::s1_count() const { return count_of(s1, n); }
std::int64_t CodeSpec::s2_count() const { return count_of(s2, n); }

namespace {

struct Stats {
  Mat u1u2, u2x;        // generation joints
  Mat u1y1, u1y3, u2y1, u2y2, xy1;  // decoding joints
  Vec pu1;
  std::vector<Vec> law_cdf;  // per input letter, over flat (y1,y2,y3)
};

Stats make_stats(const CodeSpec& spec) {
  // Chain joint over (U1, U2, X, Y1, Y2, Y3)
  JointPmf j = aux_channel_joint(spec.aux, spec.channel);
  auto pair_of = [&](Index a, Index b) {
    Index keep[2] = {a, b};
    JointPmf m = j.marginal(keep);
    Mat out(m.dim(0), m.dim(1));
    for (Index r = 0; r < m.dim(0); ++r)
      for (Index c = 0; c < m.dim(1); ++c) out(r, c) = m.flat()(r * m.dim(1) + c);
    return out;
  };
  Stats st;
  st.u1u2 = pair_of(0, 1);
  st.u2x = pair_of(1, 2);
  st.u1y1 = pair_of(0, 3);
  st.u1y3 = pair_of(0, 5);
  st.u2y1 = pair_of(1, 3);
  st.u2y2 = pair_of(1, 4);
  st.xy1 = pair_of(2, 3);
  st.pu1 = spec.aux.p_u1.probs();
  for (Index x = 0; x < spec.channel.input_size(); ++x)
    st.law_cdf.push_back(cumulative(spec.channel.law().row(x).transpose()));
  return st;
}

Word draw_iid(Rng& rng, const Vec& cdf, Index n) {
  Word w(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) w[static_cast<size_t>(i)] = static_cast<std::uint8_t>(draw_from(cdf, rng.uniform()));
  return w;
}

Word draw_conditional(Rng& rng, const std::vector<Vec>& row_cdf, const Word& parent) {
  Word w(parent.size());
  for (size_t i = 0; i < parent.size(); ++i)
    w[i] = static_cast<std::uint8_t>(draw_from(row_cdf[parent[i]], rng.uniform()));
  return w;
}

}  // namespace

Codebook generate_codebook(const CodeSpec& spec) {
  spec.validate();
  const std::int64_t m0n = spec.m0_count(), s1n = spec.s1_count(), s2n = spec.s2_count();
  const double words = static_cast<double>(m0n) +
                       static_cast<double>(m0n) * static_cast<double>(s1n) * (1.0 + static_cast<double>(s2n));
  if (words * static_cast<double>(spec.n) > 2.5e8)
    throw ValidationError("generate_codebook: codebook does not fit in memory (" +
                          std::to_string(words) + " words of length " +
                          std::to_string(spec.n) + ")");
  Stats st = make_stats(spec);

  std::vector<Vec> u2_rows, x_rows;
  for (Index r = 0; r < spec.aux.p_u2_given_u1.rows(); ++r)
    u2_rows.push_back(cumulative(spec.aux.p_u2_given_u1.matrix().row(r).transpose()));
  for (Index r = 0; r < spec.aux.p_x_given_u2.rows(); ++r)
    x_rows.push_back(cumulative(spec.aux.p_x_given_u2.matrix().row(r).transpose()));
  Vec u1_cdf = cumulative(st.pu1);

  Codebook cb;
  cb.u1.resize(static_cast<size_t>(m0n));
  cb.u2.resize(static_cast<size_t>(m0n));
  cb.x.resize(static_cast<size_t>(m0n));

  auto draw_typical_single = [&](Rng& rng, const Vec& cdf, const Vec& probs,
                                 std::int64_t& exhausted) {
    Word best;
    double best_dev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kRejectionBudget; ++it) {
      Word w = draw_iid(rng, cdf, spec.n);
      double dev = single_deviation(w, probs);
      if (dev <= spec.epsilon) return w;
      if (dev < best_dev) { best_dev = dev; best = std::move(w); }
    }
    ++exhausted;
    return best;
  };
  auto draw_typical_pair = [&](Rng& rng, const std::vector<Vec>& rows, const Word& parent,
                               const Mat& joint, std::int64_t& exhausted) {
    Word best;
    double best_dev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kRejectionBudget; ++it) {
      Word w = draw_conditional(rng, rows, parent);
      double dev = pair_deviation(parent, w, joint);
      if (dev <= spec.epsilon) return w;
      if (dev < best_dev) { best_dev = dev; best = std::move(w); }
    }
    ++exhausted;
    return best;
  };

  for (std::int64_t m = 0; m < m0n; ++m) {
    Rng rng(spec.seed, 0xC0DE0000ULL + static_cast<std::uint64_t>(m));
    cb.u1[static_cast<size_t>(m)] =
        draw_typical_single(rng, u1_cdf, st.pu1, cb.rejection_exhausted);
    cb.u2[static_cast<size_t>(m)].resize(static_cast<size_t>(s1n));
    cb.x[static_cast<size_t>(m)].resize(static_cast<size_t>(s1n));
    for (std::int64_t j = 0; j < s1n; ++j) {
      cb.u2[static_cast<size_t>(m)][static_cast<size_t>(j)] = draw_typical_pair(
          rng, u2_rows, cb.u1[static_cast<size_t>(m)], st.u1u2, cb.rejection_exhausted);
      auto& xs = cb.x[static_cast<size_t>(m)][static_cast<size_t>(j)];
      xs.resize(static_cast<size_t>(s2n));
      for (std::int64_t k = 0; k < s2n; ++k)
        xs[static_cast<size_t>(k)] =
            draw_typical_pair(rng, x_rows, cb.u2[static_cast<size_t>(m)][static_cast<size_t>(j)],
                              st.u2x, cb.rejection_exhausted);
    }
  }
  return cb;
}

std::pair<std::int64_t, std::int64_t> indirect_decode_y2(
    const std::vector<std::vector<Word>>& u2_words, const Word& y2, const Mat& joint_u2_y2,
    double eps, std::int64_t true_m0) {
  std::int64_t decoded = -1;
  std::int64_t false_pairs = 0;
  bool ambiguous = false;
  for (size_t m = 0; m < u2_words.size(); ++m) {
    std::int64_t hits = 0;
    for (const Word& w : u2_words[m])
      if (jointly_typical(w, y2, joint_u2_y2, eps)) ++hits;
    if (static_cast<std::int64_t>(m) != true_m0) false_pairs += hits;
    if (hits > 0) {
      if (decoded < 0)
        decoded = static_cast<std::int64_t>(m);
      else
        ambiguous = true;
    }
  }
  if (ambiguous) decoded = -1;
  return {decoded, false_pairs};
}

SimResult simulate(const CodeSpec& spec, std::int64_t trials) {
  spec.validate();
  if (trials < 1) throw ValidationError("simulate: trials must be positive");
  Codebook cb = generate_codebook(spec);
  Stats st = make_stats(spec);
  const std::int64_t m0n = spec.m0_count(), s1n = spec.s1_count(), s2n = spec.s2_count();
  auto [ny1, ny2, ny3] = spec.channel.output_sizes();

  struct Tally {
    std::int64_t e1 = 0, e2 = 0, e3 = 0, eany = 0, false_pairs = 0;
  };
  int workers = thread_count();
  std::vector<Tally> tallies(static_cast<size_t>(workers));
  std::int64_t chunk = (trials + workers - 1) / workers;

  parallel_chunks(trials, [&](std::int64_t b, std::int64_t e) {
    Tally& tl = tallies[static_cast<size_t>(std::min<std::int64_t>(b / chunk,
                                                                   workers - 1))];
    for (std::int64_t t = b; t < e; ++t) {
      Rng rng(spec.seed, 0x7117A100ULL + static_cast<std::uint64_t>(t));
      std::int64_t m0 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(m0n)));
      std::int64_t j1 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(s1n)));
      std::int64_t j2 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(s2n)));
      const Word& xw = cb.x[static_cast<size_t>(m0)][static_cast<size_t>(j1)]
                           [static_cast<size_t>(j2)];
      Word y1(static_cast<size_t>(spec.n)), y2(static_cast<size_t>(spec.n)),
          y3(static_cast<size_t>(spec.n));
      for (Index i = 0; i < spec.n; ++i) {
        Index flat = draw_from(st.law_cdf[xw[static_cast<size_t>(i)]], rng.uniform());
        y1[static_cast<size_t>(i)] = static_cast<std::uint8_t>(flat / (ny2 * ny3));
        y2[static_cast<size_t>(i)] = static_cast<std::uint8_t>((flat / ny3) % ny2);
        y3[static_cast<size_t>(i)] = static_cast<std::uint8_t>(flat % ny3);
      }

      // Receiver 3: unique cloud center typical with y3
      std::int64_t hat3 = -1;
      for (std::int64_t m = 0; m < m0n; ++m)
        if (jointly_typical(cb.u1[static_cast<size_t>(m)], y3, st.u1y3, spec.epsilon)) {
          if (hat3 >= 0) { hat3 = -1; break; }
          hat3 = m;
        }
      bool bad3 = hat3 != m0;

      // Receiver 1: successive unique decoding of u1, u2, x
      bool bad1 = false;
      std::int64_t hat1 = -1;
      for (std::int64_t m = 0; m < m0n; ++m)
        if (jointly_typical(cb.u1[static_cast<size_t>(m)], y1, st.u1y1, spec.epsilon)) {
          if (hat1 >= 0) { hat1 = -1; break; }
          hat1 = m;
        }
      if (hat1 != m0) {
        bad1 = true;
      } else {
        std::int64_t hj1 = -1;
        const auto& cloud = cb.u2[static_cast<size_t>(hat1)];
        for (std::int64_t j = 0; j < s1n; ++j)
          if (jointly_typical(cloud[static_cast<size_t>(j)], y1, st.u2y1, spec.epsilon)) {
            if (hj1 >= 0) { hj1 = -1; break; }
            hj1 = j;
          }
        if (hj1 != j1) {
          bad1 = true;
        } else {
          std::int64_t hj2 = -1;
          const auto& sats = cb.x[static_cast<size_t>(hat1)][static_cast<size_t>(hj1)];
          for (std::int64_t kk = 0; kk < s2n; ++kk)
            if (jointly_typical(sats[static_cast<size_t>(kk)], y1, st.xy1, spec.epsilon)) {
              if (hj2 >= 0) { hj2 = -1; break; }
              hj2 = kk;
            }
          bad1 = hj2 != j2;
        }
      }

      // Receiver 2: indirect through the satellite layer only
      auto [hat2, fp] = indirect_decode_y2(cb.u2, y2, st.u2y2, spec.epsilon, m0);
      bool bad2 = hat2 != m0;
      tl.false_pairs += fp;

      tl.e1 += bad1;
      tl.e2 += bad2;
      tl.e3 += bad3;
      tl.eany += (bad1 || bad2 || bad3);
    }
  }, workers);

  SimResult res;
  res.trials = trials;
  res.rejection_exhausted = cb.rejection_exhausted;
  std::int64_t fp = 0;
  for (const auto& tl : tallies) {
    res.err_y1 += tl.e1;
    res.err_y2 += tl.e2;
    res.err_y3 += tl.e3;
    res.err_any += tl.eany;
    fp += tl.false_pairs;
  }
  res.pe = static_cast<double>(res.err_any) / static_cast<double>(trials);
  res.avg_false_pairs_y2 = static_cast<double>(fp) / static_cast<double>(trials);
  // Wilson 95%
  const double z = 1.959963985;
  double nn = static_cast<double>(trials), ph = res.pe;
  double denom = 1.0 + z * z / nn;
  double center = (ph + z * z / (2 * nn)) / denom;
  double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
  res.ci_lo = std::max(0.0, center - half);
  res.ci_hi = std::min(1.0, center + half);
  return res;
}

}  // namespace rrw
