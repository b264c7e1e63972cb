#pragma once

#include <string>

#include "rrw/aux_dist.hpp"
#include "rrw/channel.hpp"

namespace rrw {

// Channel JSON schema: top-level `input_size`, `outputs` (three sizes), and
// exactly one of
//   "law"        flattened row-major table (x major, then y1, y2, y3)
//   "multilevel" { "p_y1y2_given_x": [[..]], "p_y3_given_y1": [[..]] }
//   "product"    { "branch1": [M1, M2, M3], "branch2": [M1, M2] }
// Rows must sum to 1 within 1e-6 on load and are renormalized to exact mass.
BroadcastChannel3 load_channel_json(const std::string& text);
BroadcastChannel3 load_channel_file(const std::string& path);
std::string channel_to_json(const BroadcastChannel3& ch);

// AuxChain schema: { "p_u1": [..], "p_u2_given_u1": [[..]], "p_x_given_u2": [[..]] }
AuxChain load_aux_chain_json(const std::string& text);
AuxChain load_aux_chain_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// FNV-1a over the raw bytes, printed as 16 hex digits.
std::string digest_hex(const std::string& bytes);

}  // namespace rrw
