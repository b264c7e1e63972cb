#pragma once

#include <map>
#include <string>
#include <vector>

#include "rrw/errors.hpp"

namespace rrw {

// Receiver subsets are bitmasks over {1..k} (bit i-1 = receiver i).
struct MessageRequirement {
  int k = 0;
  std::vector<unsigned> demands;  // nonempty, distinct subsets

  void validate() const;
};

struct SchemeStructure {
  int k = 0;
  std::vector<unsigned> aux_subsets;              // size-descending, then lex
  std::vector<unsigned> indirect_only;            // S_I, size-ascending
  std::map<int, std::vector<unsigned>> levels;    // level 1 = largest subsets
  std::vector<std::vector<unsigned>> t_sets;      // per receiver, 1-based index 0..k-1
  std::vector<std::vector<unsigned>> t_min;
  std::vector<bool> indirect_needed;
  // cover edges B -> A (A directly below B): U_A carries U_B
  std::vector<std::pair<unsigned, unsigned>> markov_edges;
};

SchemeStructure synthesize(const MessageRequirement& req);

std::vector<int> subset_members(unsigned mask);
unsigned subset_mask(const std::vector<int>& members, int k);

std::string scheme_to_json(const SchemeStructure& s);

}  // namespace rrw
