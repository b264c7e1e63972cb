#include "rrw/scheme.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace rrw {

void MessageRequirement::validate() const {
  if (k < 1 || k > 16) throw ValidationError("scheme: k must be in 1..16");
  if (demands.empty()) throw ValidationError("scheme: no demanded subsets");
  unsigned full = (k == 32 ? ~0u : (1u << k) - 1u);
  std::vector<unsigned> seen;
  for (unsigned d : demands) {
    if (d == 0) throw ValidationError("scheme: empty demanded subset");
    if (d & ~full) throw ValidationError("scheme: receiver index out of range");
    if (std::find(seen.begin(), seen.end(), d) != seen.end())
      throw ValidationError("scheme: duplicate demanded subset");
    seen.push_back(d);
  }
}

std::vector<int> subset_members(unsigned mask) {
  std::vector<int> m;
  for (int i = 0; i < 32; ++i)
    if (mask & (1u << i)) m.push_back(i + 1);
  return m;
}

unsigned subset_mask(const std::vector<int>& members, int k) {
  unsigned m = 0;
  for (int r : members) {
    if (r < 1 || r > k) throw ValidationError("scheme: receiver index out of range");
    m |= 1u << (r - 1);
  }
  return m;
}

namespace {

bool size_desc_lex(unsigned a, unsigned b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa > pb;
  // lexicographic over the sorted member lists
  return subset_members(a) < subset_members(b);
}

bool size_asc_lex(unsigned a, unsigned b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  return subset_members(a) < subset_members(b);
}

}  // namespace

SchemeStructure synthesize(const MessageRequirement& req) {
  req.validate();
  SchemeStructure out;
  out.k = req.k;
  unsigned full = (1u << req.k) - 1u;

  // every superset of a demanded subset carries an auxiliary
  for (unsigned b = 1; b <= full; ++b)
    for (unsigned a : req.demands)
      if ((b & a) == a) {
        out.aux_subsets.push_back(b);
        break;
      }
  std::sort(out.aux_subsets.begin(), out.aux_subsets.end(), size_desc_lex);

  for (unsigned b : out.aux_subsets)
    if (std::find(req.demands.begin(), req.demands.end(), b) == req.demands.end())
      out.indirect_only.push_back(b);
  std::sort(out.indirect_only.begin(), out.indirect_only.end(), size_asc_lex);

  // level 1 holds the largest cardinality present
  int max_card = 0;
  for (unsigned b : out.aux_subsets) max_card = std::max(max_card, std::popcount(b));
  for (unsigned b : out.aux_subsets)
    out.levels[max_card - std::popcount(b) + 1].push_back(b);

  out.t_sets.resize(static_cast<size_t>(req.k));
  out.t_min.resize(static_cast<size_t>(req.k));
  out.indirect_needed.assign(static_cast<size_t>(req.k), false);
  for (int i = 1; i <= req.k; ++i) {
    auto& ti = out.t_sets[static_cast<size_t>(i - 1)];
    for (unsigned b : out.aux_subsets)
      if (b & (1u << (i - 1))) ti.push_back(b);
    auto& tmin = out.t_min[static_cast<size_t>(i - 1)];
    for (unsigned a : ti) {
      bool minimal = true;
      for (unsigned b : ti)
        if (b != a && (a & b) == b) { minimal = false; break; }
      if (minimal) tmin.push_back(a);
    }
    std::sort(tmin.begin(), tmin.end(), size_asc_lex);
    for (unsigned a : tmin)
      if (std::find(out.indirect_only.begin(), out.indirect_only.end(), a) !=
          out.indirect_only.end())
        out.indirect_needed[static_cast<size_t>(i - 1)] = true;
  }

  // cover edges: B -> A when A < B with nothing in between
  for (unsigned a : out.aux_subsets)
    for (unsigned b : out.aux_subsets) {
      if (a == b || (a & b) != a) continue;
      bool covered = false;
      for (unsigned c : out.aux_subsets)
        if (c != a && c != b && (a & c) == a && (c & b) == c) { covered = true; break; }
      if (!covered) out.markov_edges.emplace_back(b, a);
    }
  return out;
}

namespace {

void append_subset(std::ostringstream& os, unsigned mask) {
  os << '[';
  auto m = subset_members(mask);
  for (size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  os << ']';
}

void append_subset_list(std::ostringstream& os, const std::vector<unsigned>& list) {
  os << '[';
  for (size_t i = 0; i < list.size(); ++i) {
    if (i) os << ',';
    append_subset(os, list[i]);
  }
  os << ']';
}

}  // namespace

std::string scheme_to_json(const SchemeStructure& s) {
  std::ostringstream os;
  os << "{\"k\":" << s.k << ",\"aux_subsets\":";
  append_subset_list(os, s.aux_subsets);
  os << ",\"S_I\":";
  append_subset_list(os, s.indirect_only);
  os << ",\"levels\":{";
  bool first = true;
  for (const auto& [lvl, subs] : s.levels) {
    if (!first) os << ',';
    os << '"' << lvl << "\":";
    append_subset_list(os, subs);
    first = false;
  }
  os << "},\"receivers\":[";
  for (int i = 0; i < s.k; ++i) {
    if (i) os << ',';
    os << "{\"receiver\":" << (i + 1) << ",\"T\":";
    append_subset_list(os, s.t_sets[static_cast<size_t>(i)]);
    os << ",\"T_min\":";
    append_subset_list(os, s.t_min[static_cast<size_t>(i)]);
    os << ",\"indirect_needed\":" << (s.indirect_needed[static_cast<size_t>(i)] ? "true" : "false")
       << '}';
  }
  os << "],\"markov_edges\":[";
  for (size_t e = 0; e < s.markov_edges.size(); ++e) {
    if (e) os << ',';
    os << "{\"from\":";
    append_subset(os, s.markov_edges[e].first);
    os << ",\"to\":";
    append_subset(os, s.markov_edges[e].second);
    os << '}';
  }
  os << "]}";
  return os.str();
}

}  // namespace rrw
