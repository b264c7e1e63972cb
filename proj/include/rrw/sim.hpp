#pragma once

#include <cstdint>

#include "rrw/aux_dist.hpp"

namespace rrw {

// Random superposition code over a multilevel channel: cloud centers from
// p(u1), satellites from p(u2|u1), transmit words from p(x|u2). Receiver 3
// decodes the cloud directly, receiver 1 decodes the full chain, receiver 2
// recovers the common index indirectly through the satellites.
struct CodeSpec {
  BroadcastChannel3 channel;
  AuxChain aux;
  double r0 = 0.0, s1 = 0.0, s2 = 0.0;  // bits per channel use
  Index n = 1;
  double epsilon = 0.15;
  std::uint64_t seed = 1;

  CodeSpec(BroadcastChannel3 ch, AuxChain a) : channel(std::move(ch)), aux(std::move(a)) {}

  void validate() const;  // rates >= 0, n >= 1, eps in (0,0.5), n*rate <= 40
  std::int64_t m0_count() const;
  std::int64_t s1_count() const;
  std::int64_t s2_count() const;
};

// Finite-n strong typicality needs generous slack at short blocklengths.
inline double default_epsilon(Index n) { return n <= 300 ? 0.15 : 0.10; }

using Word = std::vector<std::uint8_t>;

struct Codebook {
  std::vector<Word> u1;                            // [m0]
  std::vector<std::vector<Word>> u2;               // [m0][j1]
  std::vector<std::vector<std::vector<Word>>> x;   // [m0][j1][j2]
  std::int64_t rejection_exhausted = 0;            // words kept as nearest-to-typical
};

Codebook generate_codebook(const CodeSpec& spec);

struct SimResult {
  std::int64_t trials = 0;
  std::int64_t err_y1 = 0, err_y2 = 0, err_y3 = 0, err_any = 0;
  double pe = 0.0, ci_lo = 0.0, ci_hi = 0.0;  // Wilson 95% interval on err_any
  double avg_false_pairs_y2 = 0.0;            // wrong (m0,j1) pairs passing Y2's test
  std::int64_t rejection_exhausted = 0;
};

SimResult simulate(const CodeSpec& spec, std::int64_t trials);

// Strong typicality: every empirical frequency within a multiplicative eps of
// the model probability, zero mass where the model is zero.
bool typical_word(const Word& w, const Vec& probs, double eps);
bool jointly_typical(const Word& a, const Word& b, const Mat& joint, double eps);

// Receiver 2's decoder. Takes only the satellite words keyed by (m0, j1) and
// the pair statistics; declares the unique cloud index with a typical
// satellite, -1 when none or ambiguous. true_m0 is diagnostic only (used to
// count wrong pairs that tested typical), never part of the decision.
std::pair<std::int64_t, std::int64_t> indirect_decode_y2(
    const std::vector<std::vector<Word>>& u2_words, const Word& y2, const Mat& joint_u2_y2,
    double eps, std::int64_t true_m0);

}  // namespace rrw
