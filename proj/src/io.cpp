#include "rrw/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rrw {

namespace {

using nlohmann::json;

Mat parse_matrix(const json& j, const char* field) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw ValidationError(std::string("channel file: field '") + field +
                          "' must be a matrix (array of rows)");
  Index rows = static_cast<Index>(j.size());
  Index cols = static_cast<Index>(j.front().size());
  Mat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw ValidationError(std::string("channel file: ragged rows in '") + field + "'");
    for (Index c = 0; c < cols; ++c) {
      if (!row[static_cast<size_t>(c)].is_number())
        throw ValidationError(std::string("channel file: non-numeric entry in '") + field +
                              "'");
      m(r, c) = row[static_cast<size_t>(c)].get<double>();
    }
  }
  return m;
}

// rows must sum to 1 within 1e-6; renormalize to exact mass for the library
Mat checked_rows(Mat m, const char* field) {
  for (Index r = 0; r < m.rows(); ++r) {
    double s = m.row(r).sum();
    if (std::abs(s - 1.0) > 1e-6)
      throw ValidationError(std::string("channel file: row ") + std::to_string(r) + " of '" +
                            field + "' sums to " + std::to_string(s));
    for (Index c = 0; c < m.cols(); ++c)
      if (m(r, c) < 0)
        throw ValidationError(std::string("channel file: negative probability in '") + field +
                              "'");
    m.row(r) /= s;
  }
  return m;
}

StochasticMatrix parse_stochastic(const json& j, const char* field) {
  return StochasticMatrix(checked_rows(parse_matrix(j, field), field));
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

BroadcastChannel3 load_channel_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("channel file: malformed JSON: ") + e.what());
  }
  if (!j.contains("input_size") || !j["input_size"].is_number_integer())
    throw ValidationError("channel file: missing integer field 'input_size'");
  if (!j.contains("outputs") || !j["outputs"].is_array() || j["outputs"].size() != 3)
    throw ValidationError("channel file: 'outputs' must list three sizes");
  Index nx = j["input_size"].get<Index>();
  std::array<Index, 3> outs{};
  for (size_t i = 0; i < 3; ++i) {
    if (!j["outputs"][i].is_number_integer())
      throw ValidationError("channel file: 'outputs' entries must be integers");
    outs[i] = j["outputs"][i].get<Index>();
  }
  int forms = j.contains("law") + j.contains("multilevel") + j.contains("product");
  if (forms != 1)
    throw ValidationError(
        "channel file: exactly one of 'law', 'multilevel', 'product' is required");
  if (j.contains("law")) {
    const auto& arr = j["law"];
    if (!arr.is_array())
      throw ValidationError("channel file: 'law' must be a flat array");
    Index cols = outs[0] * outs[1] * outs[2];
    if (static_cast<Index>(arr.size()) != nx * cols)
      throw ValidationError("channel file: 'law' length does not match the alphabet sizes");
    Mat law(nx, cols);
    for (Index x = 0; x < nx; ++x)
      for (Index c = 0; c < cols; ++c) {
        const auto& v = arr[static_cast<size_t>(x * cols + c)];
        if (!v.is_number()) throw ValidationError("channel file: non-numeric entry in 'law'");
        law(x, c) = v.get<double>();
      }
    return BroadcastChannel3::from_law(nx, outs, checked_rows(std::move(law), "law"));
  }
  if (j.contains("multilevel")) {
    const auto& m = j["multilevel"];
    if (!m.contains("p_y1y2_given_x") || !m.contains("p_y3_given_y1"))
      throw ValidationError(
          "channel file: 'multilevel' needs 'p_y1y2_given_x' and 'p_y3_given_y1'");
    Mat p12 = checked_rows(parse_matrix(m["p_y1y2_given_x"], "p_y1y2_given_x"),
                           "p_y1y2_given_x");
    StochasticMatrix q = parse_stochastic(m["p_y3_given_y1"], "p_y3_given_y1");
    if (p12.rows() != nx || p12.cols() != outs[0] * outs[1] || q.rows() != outs[0] ||
        q.cols() != outs[2])
      throw ValidationError("channel file: 'multilevel' tables do not match declared sizes");
    return build_multilevel(p12, outs[0], outs[1], q);
  }
  const auto& p = j["product"];
  if (!p.contains("branch1") || !p.contains("branch2") || !p["branch1"].is_array() ||
      !p["branch2"].is_array() || p["branch1"].size() != 3 || p["branch2"].size() != 2)
    throw ValidationError(
        "channel file: 'product' needs 'branch1' (3 stages) and 'branch2' (2 stages)");
  ProductChannelSpec spec(parse_stochastic(p["branch1"][0], "branch1[0]"),
                          parse_stochastic(p["branch1"][1], "branch1[1]"),
                          parse_stochastic(p["branch1"][2], "branch1[2]"),
                          parse_stochastic(p["branch2"][0], "branch2[0]"),
                          parse_stochastic(p["branch2"][1], "branch2[1]"));
  BroadcastChannel3 ch = build_product(spec);
  if (ch.input_size() != nx || ch.output_sizes() != outs)
    throw ValidationError("channel file: declared sizes do not match the product stages");
  return ch;
}

BroadcastChannel3 load_channel_file(const std::string& path) {
  return load_channel_json(read_file(path));
}

std::string channel_to_json(const BroadcastChannel3& ch) {
  json j;
  j["input_size"] = ch.input_size();
  j["outputs"] = {ch.output_sizes()[0], ch.output_sizes()[1], ch.output_sizes()[2]};
  if (ch.product_spec()) {
    const auto& spec = *ch.product_spec();
    j["product"]["branch1"] = {matrix_json(spec.branch1[0].matrix()),
                               matrix_json(spec.branch1[1].matrix()),
                               matrix_json(spec.branch1[2].matrix())};
    j["product"]["branch2"] = {matrix_json(spec.branch2[0].matrix()),
                               matrix_json(spec.branch2[1].matrix())};
  } else {
    json flat = json::array();
    for (Index x = 0; x < ch.input_size(); ++x)
      for (Index c = 0; c < ch.law().cols(); ++c) flat.push_back(ch.law()(x, c));
    j["law"] = std::move(flat);
  }
  j["structure"] = to_string(ch.structure());
  return j.dump(2);
}

AuxChain load_aux_chain_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("aux file: malformed JSON: ") + e.what());
  }
  if (!j.contains("p_u1") || !j["p_u1"].is_array())
    throw ValidationError("aux file: missing array field 'p_u1'");
  Vec pu1(static_cast<Index>(j["p_u1"].size()));
  double s = 0;
  for (Index i = 0; i < pu1.size(); ++i) {
    pu1(i) = j["p_u1"][static_cast<size_t>(i)].get<double>();
    s += pu1(i);
  }
  if (std::abs(s - 1.0) > 1e-6) throw ValidationError("aux file: 'p_u1' sums to " + std::to_string(s));
  pu1 /= s;
  if (!j.contains("p_u2_given_u1") || !j.contains("p_x_given_u2"))
    throw ValidationError("aux file: needs 'p_u2_given_u1' and 'p_x_given_u2'");
  StochasticMatrix pu2 = parse_stochastic(j["p_u2_given_u1"], "p_u2_given_u1");
  StochasticMatrix px = parse_stochastic(j["p_x_given_u2"], "p_x_given_u2");
  return AuxChain(FinitePmf(std::move(pu1)), std::move(pu2), std::move(px));
}

AuxChain load_aux_chain_file(const std::string& path) {
  return load_aux_chain_json(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rrw
