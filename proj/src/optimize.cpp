#include "rrw/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "rrw/parallel.hpp"
#include "rrw/rng.hpp"

namespace rrw {

namespace {

// A candidate is a parameter point of one of a few auxiliary shapes; params
// concatenate probability blocks that are renormalized on evaluation.
struct Candidate {
  enum class Kind { single, chain, triple, product_pair, product_chain };
  Kind kind;
  std::vector<Index> sizes;
  std::vector<std::pair<size_t, size_t>> blocks;  // (offset, length)
  std::vector<double> params;
};

void push_block(Candidate& c, const Vec& v) {
  c.blocks.emplace_back(c.params.size(), static_cast<size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) c.params.push_back(v(i));
}

void push_matrix(Candidate& c, const Mat& m) {
  for (Index r = 0; r < m.rows(); ++r) push_block(c, m.row(r).transpose());
}

Vec take_block(const Candidate& c, size_t b) {
  auto [off, len] = c.blocks[b];
  Vec v(static_cast<Index>(len));
  double s = 0.0;
  for (size_t i = 0; i < len; ++i) {
    v(static_cast<Index>(i)) = std::max(0.0, c.params[off + i]);
    s += v(static_cast<Index>(i));
  }
  if (s < 1e-300) return Vec::Constant(static_cast<Index>(len), 1.0 / double(len));
  return v / s;
}

Mat take_matrix(const Candidate& c, size_t first_block, Index rows, Index cols) {
  Mat m(rows, cols);
  for (Index r = 0; r < rows; ++r) m.row(r) = take_block(c, first_block + r).transpose();
  return m;
}

struct Problem {
  std::string bound_id;
  const BroadcastChannel3* ch;
  bool prop5_pin_u3u1 = false;  // force |V3| = 1 in triples

  RateConstraintSystem evaluate(const Candidate& c) const {
    switch (c.kind) {
      case Candidate::Kind::single: {
        Index nu = c.sizes[0], nx = c.sizes[1];
        AuxSingle aux(FinitePmf(take_block(c, 0)),
                      StochasticMatrix(take_matrix(c, 1, nu, nx)));
        if (bound_id == "cor1") return eval_cor1(aux, *ch);
        if (bound_id == "bzt") return eval_bzt(aux, *ch);
        return eval_km3(aux, *ch);
      }
      case Candidate::Kind::chain: {
        Index n1 = c.sizes[0], n2 = c.sizes[1], nx = c.sizes[2];
        AuxChain aux(FinitePmf(take_block(c, 0)),
                     StochasticMatrix(take_matrix(c, 1, n1, n2)),
                     StochasticMatrix(take_matrix(c, 1 + static_cast<size_t>(n1), n2, nx)));
        return eval_thm1(aux, *ch);
      }
      case Candidate::Kind::triple: {
        Index n1 = c.sizes[0], nv2 = c.sizes[1], nv3 = c.sizes[2], nx = c.sizes[3];
        AuxTriple aux(FinitePmf(take_block(c, 0)), nv2, nv3,
                      StochasticMatrix(take_matrix(c, 1, n1, nv2 * nv3)),
                      StochasticMatrix(take_matrix(c, 1 + static_cast<size_t>(n1),
                                                   n1 * nv2 * nv3, nx)));
        if (bound_id == "prop6") return eval_prop6(aux, *ch);
        if (bound_id == "thm2") return eval_thm2(aux, *ch);
        return eval_prop5(aux, *ch);
      }
      case Candidate::Kind::product_pair: {
        const auto& spec = *ch->product_spec();
        Index nv1 = c.sizes[0], nx1 = c.sizes[1], nv2 = c.sizes[2], nx2 = c.sizes[3];
        size_t b2 = 1 + static_cast<size_t>(nv1);
        AuxSingle v1(FinitePmf(take_block(c, 0)),
                     StochasticMatrix(take_matrix(c, 1, nv1, nx1)));
        AuxSingle v2(FinitePmf(take_block(c, b2)),
                     StochasticMatrix(take_matrix(c, b2 + 1, nv2, nx2)));
        return eval_product_bzt(v1, v2, spec);
      }
      case Candidate::Kind::product_chain: {
        const auto& spec = *ch->product_spec();
        Index n11 = c.sizes[0], n21 = c.sizes[1], nx1 = c.sizes[2];
        Index nv12 = c.sizes[3], nx2 = c.sizes[4];
        size_t b = 1;
        StochasticMatrix stage(take_matrix(c, b, n11, n21));
        b += static_cast<size_t>(n11);
        StochasticMatrix px1(take_matrix(c, b, n21, nx1));
        b += static_cast<size_t>(n21);
        AuxChain chain(FinitePmf(take_block(c, 0)), std::move(stage), std::move(px1));
        AuxSingle v12(FinitePmf(take_block(c, b)),
                      StochasticMatrix(take_matrix(c, b + 1, nv12, nx2)));
        return eval_product_capacity(chain, v12, spec);
      }
    }
    throw InternalError("optimize: unknown candidate kind");
  }
};

Candidate make_single(const FinitePmf& pu, const StochasticMatrix& pxu) {
  Candidate c;
  c.kind = Candidate::Kind::single;
  c.sizes = {pu.size(), pxu.cols()};
  push_block(c, pu.probs());
  push_matrix(c, pxu.matrix());
  return c;
}

Candidate make_chain(const AuxChain& a) {
  Candidate c;
  c.kind = Candidate::Kind::chain;
  c.sizes = {a.p_u1.size(), a.p_u2_given_u1.cols(), a.p_x_given_u2.cols()};
  push_block(c, a.p_u1.probs());
  push_matrix(c, a.p_u2_given_u1.matrix());
  push_matrix(c, a.p_x_given_u2.matrix());
  return c;
}

Candidate make_triple(const AuxTriple& a, Index nx) {
  Candidate c;
  c.kind = Candidate::Kind::triple;
  c.sizes = {a.p_u1.size(), a.n_v2, a.n_v3, nx};
  push_block(c, a.p_u1.probs());
  push_matrix(c, a.p_v2v3_given_u1.matrix());
  push_matrix(c, a.p_x_given_u1v2v3.matrix());
  return c;
}

Candidate make_product_pair(const AuxSingle& v1, const AuxSingle& v2) {
  Candidate c;
  c.kind = Candidate::Kind::product_pair;
  c.sizes = {v1.p_u.size(), v1.p_x_given_u.cols(), v2.p_u.size(), v2.p_x_given_u.cols()};
  push_block(c, v1.p_u.probs());
  push_matrix(c, v1.p_x_given_u.matrix());
  push_block(c, v2.p_u.probs());
  push_matrix(c, v2.p_x_given_u.matrix());
  return c;
}

Candidate make_product_chain(const AuxChain& b1, const AuxSingle& v12) {
  Candidate c;
  c.kind = Candidate::Kind::product_chain;
  c.sizes = {b1.p_u1.size(), b1.p_u2_given_u1.cols(), b1.p_x_given_u2.cols(),
             v12.p_u.size(), v12.p_x_given_u.cols()};
  push_block(c, b1.p_u1.probs());
  push_matrix(c, b1.p_u2_given_u1.matrix());
  push_matrix(c, b1.p_x_given_u2.matrix());
  push_block(c, v12.p_u.probs());
  push_matrix(c, v12.p_x_given_u.matrix());
  return c;
}

// Compositions of m into k parts, as pmfs over k letters.
void simplex_grid(Index k, int m, std::vector<Vec>& out) {
  std::vector<int> comp(static_cast<size_t>(k), 0);
  std::function<void(Index, int)> rec = [&](Index pos, int left) {
    if (pos == k - 1) {
      comp[static_cast<size_t>(pos)] = left;
      Vec v(k);
      for (Index i = 0; i < k; ++i) v(i) = comp[static_cast<size_t>(i)] / double(m);
      out.push_back(v);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      comp[static_cast<size_t>(pos)] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, m);
}

}  // namespace

AuxCaps resolve_caps(const std::string& bound_id, Index nx, const SearchConfig& cfg) {
  auto paper = [&]() -> std::array<Index, 3> {
    if (bound_id == "thm1") return {nx + 4, nx * nx + 5 * nx + 4, 1};
    if (bound_id == "prop6") return {nx + 6, (nx + 1) * (nx + 6), (nx + 1) * (nx + 6)};
    // no stated bound: allow anything requested
    return {1 << 20, 1 << 20, 1 << 20};
  }();
  AuxCaps caps;
  Index desk = cfg.use_paper_caps ? Index{1 << 20} : Index{8};
  auto pick = [&](Index requested, Index bound) {
    if (requested == 0) return std::min(bound, desk);
    if (requested > bound)
      throw ValidationError("SearchConfig: requested cap exceeds the bound's cardinality limit");
    return requested;
  };
  caps.u1 = pick(cfg.cap_u1, paper[0]);
  caps.u2 = pick(cfg.cap_u2, paper[1]);
  caps.u3 = pick(cfg.cap_u3, paper[2]);
  return caps;
}

namespace {

std::vector<Candidate> build_candidates(const Problem& prob, const SearchConfig& cfg,
                                        const AuxCaps& caps) {
  const BroadcastChannel3& ch = *prob.ch;
  const std::string& id = prob.bound_id;
  Index nx = ch.input_size();
  std::vector<Candidate> out;
  int g = std::max(2, cfg.grid_levels);
  auto grid01 = [&](int i) { return double(i) / double(g - 1); };

  bool single_kind = id == "km3" || id == "bzt" || id == "cor1";
  bool chain_kind = id == "thm1";
  bool triple_kind = id == "prop5" || id == "prop6" || id == "thm2";

  // (a) structured candidates
  const auto& pspec = ch.product_spec();
  bool product_binary = pspec && pspec->branch1[0].rows() == 2 && pspec->branch2[0].rows() == 2;
  if (product_binary && single_kind && id != "cor1") {
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        out.push_back(make_product_pair(erasure_single(grid01(i)), erasure_single(grid01(j))));
  }
  if (product_binary && chain_kind) {
    for (int i = 0; i < g; ++i)
      for (int k = i; k < g; ++k)
        for (int j = 0; j < g; ++j)
          out.push_back(make_product_chain(erasure_chain(grid01(i), grid01(k)),
                                           erasure_single(grid01(j))));
  }

  // channel-independent structured families over a p(x) grid
  std::vector<Vec> pxs;
  simplex_grid(nx, std::min(8, std::max(2, g / 3)), pxs);
  for (const auto& px : pxs) {
    FinitePmf p(px);
    if (single_kind) {
      out.push_back(make_single(FinitePmf::uniform(1), StochasticMatrix(px.transpose())));
      out.push_back(make_single(p, StochasticMatrix::identity(nx)));
    }
    if (chain_kind) {
      // U1 constant, U2 = X
      out.push_back(make_chain(AuxChain(FinitePmf::uniform(1),
                                        StochasticMatrix(px.transpose()),
                                        StochasticMatrix::identity(nx))));
      // U1 = U2 = X
      out.push_back(make_chain(
          AuxChain(p, StochasticMatrix::identity(nx), StochasticMatrix::identity(nx))));
    }
    if (triple_kind) {
      Index nv3 = 1;
      // U2 = U3 = U1 = X and all constant
      out.push_back(make_triple(
          AuxTriple(p, 1, nv3, StochasticMatrix(Mat::Ones(nx, 1)),
                    StochasticMatrix::identity(nx)),
          nx));
      out.push_back(make_triple(AuxTriple(FinitePmf::uniform(1), 1, 1,
                                          StochasticMatrix(Mat::Ones(1, 1)),
                                          StochasticMatrix(px.transpose())),
                                nx));
      if (!prob.prop5_pin_u3u1 && id != "prop6") {
        // U2 = X with trivial U1, U3
        Mat pxr(1, nx * 1);
        out.push_back(make_triple(AuxTriple(FinitePmf::uniform(1), nx, 1,
                                            StochasticMatrix(px.transpose()),
                                            StochasticMatrix::identity(nx)),
                                  nx));
      }
    }
  }

  // (b) seeded random restarts over capped alphabets
  for (int rix = 0; rix < cfg.random_restarts; ++rix) {
    Rng rng(cfg.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(rix));
    if (single_kind) {
      Index nu = 2 + static_cast<Index>(rix % std::max<Index>(1, std::min(caps.u1, nx + 1) - 1));
      AuxSingle aux = random_single(rng, nu, nx);
      out.push_back(make_single(aux.p_u, aux.p_x_given_u));
    } else if (chain_kind) {
      Index n1 = 2 + static_cast<Index>(rix % std::max<Index>(1, std::min<Index>(caps.u1, 4) - 1));
      Index n2 = 2 + static_cast<Index>((rix / 3) % std::max<Index>(1, std::min<Index>(caps.u2, 5) - 1));
      out.push_back(make_chain(random_chain(rng, n1, n2, nx)));
      if (product_binary) {
        out.push_back(make_product_chain(random_chain(rng, 3, 3, 2), random_single(rng, 3, 2)));
      }
    } else if (triple_kind) {
      Index n1 = 2 + static_cast<Index>(rix % 2);
      Index nv2 = 2 + static_cast<Index>((rix / 2) % 2);
      Index nv3 = prob.prop5_pin_u3u1 ? 1 : 2 + static_cast<Index>((rix / 4) % 2);
      n1 = std::min(n1, caps.u1);
      nv2 = std::max<Index>(1, std::min(nv2, caps.u2 / std::max<Index>(n1, 1)));
      if (!prob.prop5_pin_u3u1)
        nv3 = std::max<Index>(1, std::min(nv3, caps.u3 / std::max<Index>(n1, 1)));
      out.push_back(make_triple(random_triple(rng, n1, nv2, nv3, nx), nx));
    }
    if (product_binary && single_kind && id != "cor1") {
      out.push_back(make_product_pair(random_single(rng, 3, 2), random_single(rng, 3, 2)));
    }
  }
  return out;
}

}  // namespace

static RegionApprox run_search(const Problem& prob, const SearchConfig& cfg,
                               const std::vector<RateVector>& weights) {
  if (!known_bound_id(prob.bound_id)) throw ValidationError("unknown bound id: " + prob.bound_id);
  AuxCaps caps = resolve_caps(prob.bound_id, prob.ch->input_size(), cfg);
  int dim = bound_dim(prob.bound_id);
  std::vector<Candidate> cands = build_candidates(prob, cfg, caps);
  if (cands.empty()) throw InternalError("optimize: no candidates");

  int workers = thread_count();
  std::vector<RegionAccumulator> accs;
  for (int t = 0; t < workers; ++t) accs.emplace_back(weights, dim);
  std::int64_t total = static_cast<std::int64_t>(cands.size());
  std::int64_t chunk = (total + workers - 1) / workers;
  parallel_chunks(total, [&](std::int64_t b, std::int64_t e) {
    size_t slot = std::min(static_cast<size_t>(b / chunk), accs.size() - 1);
    for (std::int64_t i = b; i < e; ++i)
      accs[slot].add(prob.evaluate(cands[static_cast<size_t>(i)]), i);
  }, workers);
  for (size_t t = 1; t < accs.size(); ++t) accs[0].merge(accs[t]);
  RegionAccumulator& acc = accs[0];

  // (c) per-weight coordinate refinement, multiplicative with halving step
  std::vector<std::vector<Candidate>> improved(weights.size());
  parallel_chunks(static_cast<std::int64_t>(weights.size()), [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t wi = b; wi < e; ++wi) {
      std::int64_t tag = acc.best_tag(static_cast<size_t>(wi));
      if (tag < 0) continue;
      Candidate cur = cands[static_cast<size_t>(tag)];
      const RateVector& w = weights[static_cast<size_t>(wi)];
      auto support_of = [&](const Candidate& c) {
        return max_weighted_rate(prob.evaluate(c), w).value;
      };
      double best = support_of(cur);
      double step = 0.30;
      for (int round = 0; round < cfg.refine_iters; ++round) {
        bool any = false;
        for (size_t pi = 0; pi < cur.params.size(); ++pi) {
          for (double factor : {1.0 + step, 1.0 / (1.0 + step)}) {
            Candidate trial = cur;
            trial.params[pi] = std::max(1e-12, trial.params[pi]) * factor;
            double v = support_of(trial);
            if (v > best + 1e-12) {
              best = v;
              cur = trial;
              improved[static_cast<size_t>(wi)].push_back(trial);
              any = true;
            }
          }
        }
        if (!any) step *= 0.5;
      }
    }
  }, workers);
  std::int64_t next_tag = total;
  for (auto& list : improved)
    for (auto& c : list) acc.add(prob.evaluate(c), next_tag++);
  return acc.finish();
}

RegionApprox optimize_region(const std::string& bound_id, const BroadcastChannel3& ch,
                             const SearchConfig& cfg,
                             const std::vector<RateVector>& weights) {
  Problem prob{bound_id, &ch, false};
  return run_search(prob, cfg, weights);
}

RegionApprox optimize_prop5_u3u1(const BroadcastChannel3& ch, const SearchConfig& cfg,
                                 const std::vector<RateVector>& weights) {
  Problem prob{"prop5", &ch, true};
  return run_search(prob, cfg, weights);
}

}  // namespace rrw
