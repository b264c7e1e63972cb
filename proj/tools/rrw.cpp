// rrw - rate-region workbench for 3-receiver broadcast channels with degraded
// message sets: bound evaluation and search, closed-form examples, symbolic
// Fourier-Motzkin derivations, scheme synthesis, and a coding simulator.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrw/closed_form.hpp"
#include "rrw/fme.hpp"
#include "rrw/io.hpp"
#include "rrw/optimize.hpp"
#include "rrw/scheme.hpp"
#include "rrw/sim.hpp"

namespace {

constexpr const char* kVersion = "rrw 1.0.0";

using nlohmann::ordered_json;

struct ManifestWriter {
  std::string command;
  ordered_json inputs = ordered_json::object();
  std::uint64_t seed = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void input_file(const std::string& path) {
    inputs[path] = rrw::digest_hex(rrw::read_file(path));
  }
  void write(const std::string& out_prefix) const {
    ordered_json m;
    m["command"] = command;
    m["inputs"] = inputs;
    m["seed"] = seed;
    m["version"] = kVersion;
    m["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rrw::write_file(out_prefix + ".manifest.json", m.dump(2) + "\n");
  }
};

void write_region(const rrw::RegionApprox& region, const std::string& out_prefix) {
  rrw::write_file(out_prefix + ".csv", rrw::region_to_csv(region));
  rrw::write_file(out_prefix + ".json", rrw::region_to_json(region));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-region workbench for 3-receiver broadcast channels"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // ---------------------------------------------------------------- region
  auto* region_cmd = app.add_subcommand("region", "evaluate and search a bound's region");
  std::string bound_id, channel_path, out_prefix = "region_out";
  rrw::SearchConfig cfg;
  int angles = 181;
  bool paper_caps = false;
  region_cmd->add_option("--bound", bound_id, "km3|bzt|thm1|prop5|prop6|thm2|cor1")
      ->required();
  region_cmd->add_option("--channel", channel_path, "channel JSON file")->required();
  region_cmd->add_option("--out", out_prefix, "output prefix");
  region_cmd->add_option("--seed", cfg.seed, "search seed");
  region_cmd->add_option("--grid-levels", cfg.grid_levels, "structured grid points");
  region_cmd->add_option("--restarts", cfg.random_restarts, "random restarts");
  region_cmd->add_option("--refine", cfg.refine_iters, "refinement sweeps per weight");
  region_cmd->add_option("--angles", angles, "weight directions (2-D bounds)");
  region_cmd->add_flag("--paper-caps", paper_caps, "lift the desk-scale cardinality cap");

  // --------------------------------------------------------------- compare
  auto* compare_cmd = app.add_subcommand("compare", "compare two bounds' regions");
  std::string bound_a, bound_b, cmp_channel, cmp_out = "compare_out";
  double margin = 1e-3;
  rrw::SearchConfig cmp_cfg;
  compare_cmd->add_option("--bound-a", bound_a)->required();
  compare_cmd->add_option("--bound-b", bound_b)->required();
  compare_cmd->add_option("--channel", cmp_channel)->required();
  compare_cmd->add_option("--out", cmp_out);
  compare_cmd->add_option("--seed", cmp_cfg.seed);
  compare_cmd->add_option("--margin", margin, "dominance margin (bits)");

  // --------------------------------------------------------------- example
  auto* example_cmd = app.add_subcommand("example", "closed-form worked examples");
  auto* bec_cmd = example_cmd->add_subcommand("bec", "product erasure example");
  std::string bec_kind = "capacity", bec_out = "bec_out";
  double grid_step = 0.005;
  bec_cmd->add_option("--kind", bec_kind, "bzt|capacity")->required();
  bec_cmd->add_option("--grid-step", grid_step);
  bec_cmd->add_option("--out", bec_out);
  auto* gauss_cmd = example_cmd->add_subcommand("gaussian", "Gaussian product example");
  std::string gauss_kind = "bzt", gauss_out = "gaussian_out";
  gauss_cmd->add_option("--kind", gauss_kind, "bzt|inner")->required();
  gauss_cmd->add_option("--out", gauss_out);

  // ------------------------------------------------------------------- fme
  auto* fme_cmd = app.add_subcommand("fme", "symbolic derivations");
  auto* derive_cmd = fme_cmd->add_subcommand("derive", "run a named elimination");
  std::string system_id, eliminate_list, fme_out = "fme_out";
  derive_cmd->add_option("--system", system_id, "prop5-raw|thm2-raw|appC-equiv|appC-R1zero")
      ->required();
  derive_cmd->add_option("--eliminate", eliminate_list, "comma-separated variables");
  derive_cmd->add_option("--out", fme_out);

  // ---------------------------------------------------------------- scheme
  auto* scheme_cmd = app.add_subcommand("scheme", "scheme-structure synthesis");
  auto* synth_cmd = scheme_cmd->add_subcommand("synth", "synthesize for a demand set");
  int k = 0;
  std::vector<std::string> demands;
  std::string scheme_out = "scheme_out";
  synth_cmd->add_option("--k", k, "number of receivers")->required();
  synth_cmd->add_option("--demand", demands, "receiver subset, e.g. 1,2 (repeatable)")
      ->required();
  synth_cmd->add_option("--out", scheme_out);

  // ------------------------------------------------------------------- sim
  auto* sim_cmd = app.add_subcommand("sim", "random-coding simulation");
  auto* run_cmd = sim_cmd->add_subcommand("run", "run the superposition scheme");
  std::string sim_channel, sim_aux, sim_out = "sim_out";
  double r0 = 0, s1 = 0, s2 = 0, epsilon = 0.0;
  std::int64_t n = 100, trials = 1000;
  std::uint64_t sim_seed = 1;
  run_cmd->add_option("--channel", sim_channel)->required();
  run_cmd->add_option("--aux", sim_aux)->required();
  run_cmd->add_option("--r0", r0)->required();
  run_cmd->add_option("--s1", s1)->required();
  run_cmd->add_option("--s2", s2)->required();
  run_cmd->add_option("--n", n)->required();
  run_cmd->add_option("--trials", trials);
  run_cmd->add_option("--seed", sim_seed);
  run_cmd->add_option("--epsilon", epsilon, "typicality slack (default 0.15, 0.1 above n=300)");
  run_cmd->add_option("--out", sim_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*region_cmd) {
      if (!rrw::known_bound_id(bound_id))
        throw rrw::ValidationError("unknown bound id: " + bound_id);
      ManifestWriter mw;
      mw.command = "region --bound " + bound_id;
      mw.input_file(channel_path);
      mw.seed = cfg.seed;
      cfg.use_paper_caps = paper_caps;
      rrw::BroadcastChannel3 ch = rrw::load_channel_file(channel_path);
      auto weights = rrw::default_weights(rrw::bound_dim(bound_id), angles);
      rrw::RegionApprox region = rrw::optimize_region(bound_id, ch, cfg, weights);
      write_region(region, out_prefix);
      mw.write(out_prefix);
      std::cout << "wrote " << out_prefix << ".csv and " << out_prefix << ".json\n";
    } else if (*compare_cmd) {
      if (!rrw::known_bound_id(bound_a) || !rrw::known_bound_id(bound_b))
        throw rrw::ValidationError("unknown bound id");
      if (rrw::bound_dim(bound_a) != rrw::bound_dim(bound_b))
        throw rrw::ValidationError("bounds live in different rate dimensions");
      ManifestWriter mw;
      mw.command = "compare --bound-a " + bound_a + " --bound-b " + bound_b;
      mw.input_file(cmp_channel);
      mw.seed = cmp_cfg.seed;
      rrw::BroadcastChannel3 ch = rrw::load_channel_file(cmp_channel);
      auto weights = rrw::default_weights(rrw::bound_dim(bound_a));
      rrw::RegionApprox ra = rrw::optimize_region(bound_a, ch, cmp_cfg, weights);
      rrw::RegionApprox rb = rrw::optimize_region(bound_b, ch, cmp_cfg, weights);
      rrw::DominanceReport rep = rrw::region_dominates(ra, rb, margin);
      ordered_json out;
      out["bound_a"] = bound_a;
      out["bound_b"] = bound_b;
      out["margin"] = margin;
      out["max_gap"] = rep.max_gap;
      out["max_reverse_gap"] = rep.max_reverse_gap;
      out["a_exceeds_b_at_weights"] = rep.exceed_idx;
      out["a_dominates_somewhere"] = rep.a_dominates_somewhere;
      out["b_never_exceeds"] = rep.b_never_exceeds;
      rrw::write_file(cmp_out + ".json", out.dump(2) + "\n");
      write_region(ra, cmp_out + ".a");
      write_region(rb, cmp_out + ".b");
      mw.write(cmp_out);
      std::cout << "max gap " << rep.max_gap << " bits; wrote " << cmp_out << ".json\n";
    } else if (*bec_cmd) {
      ManifestWriter mw;
      mw.command = "example bec --kind " + bec_kind;
      if (bec_kind != "bzt" && bec_kind != "capacity")
        throw rrw::ValidationError("example bec: --kind is bzt or capacity");
      rrw::RegionApprox region = rrw::bec_frontier(
          bec_kind == "bzt" ? rrw::BecKind::bzt : rrw::BecKind::capacity, grid_step);
      write_region(region, bec_out);
      auto verts = rrw::frontier_vertices(region);
      std::cout << "frontier vertices:";
      for (const auto& v : verts) std::cout << " (" << v(0) << "," << v(1) << ")";
      std::cout << "\n";
      mw.write(bec_out);
    } else if (*gauss_cmd) {
      ManifestWriter mw;
      mw.command = "example gaussian --kind " + gauss_kind;
      rrw::GaussianParams gp;  // paper parameter point
      auto weights = rrw::default_weights(2);
      rrw::RegionAccumulator acc(weights, 2);
      std::int64_t tag = 0;
      if (gauss_kind == "bzt") {
        for (int ia = 0; ia <= 20; ++ia)
          for (int ib = 0; ib <= 20; ++ib)
            for (int ip = 1; ip < 20; ++ip) {
              gp.alpha = ia / 20.0;
              gp.beta = ib / 20.0;
              gp.p1 = gp.power * ip / 20.0;
              acc.add(rrw::gaussian_bzt_system(gp), tag++);
            }
      } else if (gauss_kind == "inner") {
        for (int ia1 = 0; ia1 <= 10; ++ia1)
          for (int ia2 = 0; ia2 <= 10; ++ia2)
            for (int ib1 = 0; ib1 <= 4; ++ib1)
              for (int ib2 = 0; ib2 <= 4; ++ib2)
                for (int ip = 1; ip < 10; ++ip) {
                  gp.a1 = ia1 / 10.0;
                  gp.b1 = std::min(1.0 - gp.a1, ib1 / 4.0);
                  gp.a2 = ia2 / 10.0;
                  gp.b2 = std::min(1.0 - gp.a2, ib2 / 4.0);
                  gp.p1 = gp.power * ip / 10.0;
                  acc.add(rrw::gaussian_inner_system(gp), tag++);
                }
      } else {
        throw rrw::ValidationError("example gaussian: --kind is bzt or inner");
      }
      write_region(acc.finish(), gauss_out);
      mw.write(gauss_out);
      std::cout << "wrote " << gauss_out << ".csv and " << gauss_out << ".json\n";
    } else if (*derive_cmd) {
      ManifestWriter mw;
      mw.command = "fme derive --system " + system_id;
      std::vector<std::string> elim;
      if (!eliminate_list.empty()) {
        std::istringstream is(eliminate_list);
        for (std::string tok; std::getline(is, tok, ',');)
          if (!tok.empty()) elim.push_back(tok);
      }
      rrw::Derivation d = rrw::run_named_derivation(system_id, elim);
      std::ostringstream text;
      for (const auto& line : d.transcript) text << line << "\n";
      rrw::write_file(fme_out + ".txt", text.str());
      rrw::write_file(fme_out + ".json", rrw::system_to_json(d.result) + "\n");
      mw.write(fme_out);
      std::cout << text.str();
    } else if (*synth_cmd) {
      ManifestWriter mw;
      mw.command = "scheme synth";
      rrw::MessageRequirement req;
      req.k = k;
      for (const auto& d : demands) {
        std::vector<int> members;
        std::istringstream is(d);
        for (std::string tok; std::getline(is, tok, ',');)
          if (!tok.empty()) members.push_back(std::stoi(tok));
        req.demands.push_back(rrw::subset_mask(members, k));
      }
      rrw::SchemeStructure s = rrw::synthesize(req);
      std::string out = rrw::scheme_to_json(s) + "\n";
      rrw::write_file(scheme_out + ".json", out);
      mw.write(scheme_out);
      std::cout << out;
    } else if (*run_cmd) {
      ManifestWriter mw;
      mw.command = "sim run";
      mw.input_file(sim_channel);
      mw.input_file(sim_aux);
      mw.seed = sim_seed;
      rrw::CodeSpec spec(rrw::load_channel_file(sim_channel),
                         rrw::load_aux_chain_file(sim_aux));
      spec.r0 = r0;
      spec.s1 = s1;
      spec.s2 = s2;
      spec.n = static_cast<rrw::Index>(n);
      spec.epsilon = epsilon > 0 ? epsilon : rrw::default_epsilon(spec.n);
      spec.seed = sim_seed;
      rrw::SimResult res = rrw::simulate(spec, trials);
      ordered_json out;
      out["trials"] = res.trials;
      out["errors"] = {{"y1", res.err_y1}, {"y2", res.err_y2}, {"y3", res.err_y3},
                       {"any", res.err_any}};
      out["pe"] = res.pe;
      out["ci95"] = {res.ci_lo, res.ci_hi};
      out["avg_false_pairs_y2"] = res.avg_false_pairs_y2;
      out["rejection_exhausted_words"] = res.rejection_exhausted;
      rrw::write_file(sim_out + ".json", out.dump(2) + "\n");
      mw.write(sim_out);
      std::cout << out.dump(2) << "\n";
    }
  } catch (const rrw::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rrw::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
