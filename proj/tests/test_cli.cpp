#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rrw/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("RRW_BIN");
  REQUIRE(b != nullptr);
  return b;
}

fs::path workdir() {
  fs::path d = fs::temp_directory_path() / "rrw_cli_test";
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  std::string cmd = "cd " + workdir().string() + " && " + bin() + " " + args +
                    " > cli_stdout.txt 2> cli_stderr.txt";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& name) {
  return rrw::read_file((workdir() / name).string());
}

}  // namespace

TEST_CASE("region subcommand on the worked example channel") {
  rrw::write_file((workdir() / "bec.json").string(),
                  rrw::channel_to_json(rrw::make_bec_example()));
  int rc = run("region --bound bzt --channel bec.json --out r1 --seed 5 "
               "--grid-levels 11 --restarts 10 --refine 1 --angles 31");
  CHECK(rc == 0);
  CHECK(fs::exists(workdir() / "r1.csv"));
  CHECK(fs::exists(workdir() / "r1.json"));
  CHECK(fs::exists(workdir() / "r1.manifest.json"));
  std::string csv = slurp("r1.csv");
  CHECK(csv.find("weight_angle_deg,support,R0,R1") == 0);
  std::string manifest = slurp("r1.manifest.json");
  CHECK(manifest.find("\"seed\": 5") != std::string::npos);
  CHECK(manifest.find("bec.json") != std::string::npos);

  // byte-identical payloads on rerun
  std::string json1 = slurp("r1.json");
  REQUIRE(run("region --bound bzt --channel bec.json --out r2 --seed 5 "
              "--grid-levels 11 --restarts 10 --refine 1 --angles 31") == 0);
  CHECK(slurp("r2.json") == json1);
  CHECK(slurp("r2.csv") == csv);
}

TEST_CASE("region subcommand rejects bad input") {
  rrw::write_file((workdir() / "broken.json").string(), "{ not json at all");
  CHECK(run("region --bound bzt --channel broken.json --out broken_out") == 2);
  CHECK_FALSE(fs::exists(workdir() / "broken_out.json"));
  std::string err = slurp("cli_stderr.txt");
  CHECK(err.find("malformed JSON") != std::string::npos);

  rrw::write_file((workdir() / "bad_field.json").string(),
                  "{\"input_size\": 2, \"outputs\": [2, 2, 2], \"law\": [0.9, 0.2]}");
  CHECK(run("region --bound bzt --channel bad_field.json --out bf") == 2);
  CHECK(slurp("cli_stderr.txt").find("law") != std::string::npos);

  CHECK(run("region --bound nope --channel bec.json") == 2);
  CHECK(run("region --bound bzt") == 2);  // missing required option
}

TEST_CASE("example subcommands") {
  CHECK(run("example bec --kind bzt --grid-step 0.01 --out eb") == 0);
  std::string out = slurp("cli_stdout.txt");
  CHECK(out.find("frontier vertices:") != std::string::npos);
  CHECK(fs::exists(workdir() / "eb.csv"));
  CHECK(run("example bec --kind nope") == 2);
  CHECK(run("example gaussian --kind bzt --out eg") == 0);
  CHECK(fs::exists(workdir() / "eg.csv"));
}

TEST_CASE("fme derive subcommand") {
  CHECK(run("fme derive --system prop5-raw --out fd") == 0);
  std::string txt = slurp("fd.txt");
  CHECK(txt.find("eliminated T2") != std::string::npos);
  CHECK(txt.find("final system (10 essential rows") != std::string::npos);
  std::string js = slurp("fd.json");
  CHECK(js.find("\"variables\":[\"R0\",\"R1\"]") != std::string::npos);
  CHECK(run("fme derive --system bogus") == 2);
}

TEST_CASE("scheme synth subcommand") {
  CHECK(run("scheme synth --k 3 --demand 1 --demand 1,2 --demand 2,3 --out sy") == 0);
  std::string js = slurp("sy.json");
  CHECK(js.find("\"S_I\":[[1,3],[1,2,3]]") != std::string::npos);
  CHECK(run("scheme synth --k 3 --demand 9") == 2);
}

TEST_CASE("sim run subcommand") {
  rrw::write_file((workdir() / "bec.json").string(),
                  rrw::channel_to_json(rrw::make_bec_example()));
  rrw::write_file((workdir() / "aux.json").string(), R"({
    "p_u1": [0.5, 0.5],
    "p_u2_given_u1": [[0.5, 0.0, 0.0, 0.5], [0.0, 0.5, 0.5, 0.0]],
    "p_x_given_u2": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]
  })");
  CHECK(run("sim run --channel bec.json --aux aux.json --r0 0.02 --s1 0.02 --s2 0 "
            "--n 150 --trials 50 --seed 3 --epsilon 0.45 --out sr") == 0);
  std::string js = slurp("sr.json");
  CHECK(js.find("\"trials\": 50") != std::string::npos);
  CHECK(js.find("\"pe\":") != std::string::npos);
  // rate beyond the word-count cap is a user error
  CHECK(run("sim run --channel bec.json --aux aux.json --r0 0.5 --s1 0 --s2 0 "
            "--n 600 --trials 10") == 2);
}

TEST_CASE("compare subcommand reports the strict gap") {
  rrw::write_file((workdir() / "bec.json").string(),
                  rrw::channel_to_json(rrw::make_bec_example()));
  CHECK(run("compare --bound-a thm1 --bound-b bzt --channel bec.json --out cp "
            "--margin 0.01") == 0);
  std::string js = slurp("cp.json");
  CHECK(js.find("\"a_dominates_somewhere\": true") != std::string::npos);
  CHECK(js.find("\"b_never_exceeds\": true") != std::string::npos);
}
