#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "sbtk/format.hpp"
#include "sbtk/pipeline.hpp"
#include "support.hpp"

#ifndef SBTK_CLI_PATH
#define SBTK_CLI_PATH "sbtk"
#endif

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SBTK_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) { return sbtk::read_file(p.string()); }

}  // namespace

TEST_CASE("cli exit codes") {
  const auto dir = testing::scratch_dir("cli_codes");
  const auto square = testing::fixture("square_of_triangles.csv");
  CHECK(cli("") == 1);
  CHECK(cli("frobnicate") == 1);
  CHECK(cli("homology " + square + " --order sideways") == 1);
  CHECK(cli("entropy " + square + " --log-base 0.5") == 1);
  CHECK(cli("pea x.csv") == 1);
  CHECK(cli("homology " + (dir / "missing.csv").string()) == 2);

  sbtk::write_file((dir / "bad.csv").string(), "0,1,-2\n");
  CHECK(cli("homology " + (dir / "bad.csv").string()) == 2);
  sbtk::write_file((dir / "short.csv").string(), "tick,H\n0,0\n5,1\n");
  CHECK(cli("pea " + (dir / "short.csv").string() + " -o " + (dir / "pea").string()) == 2);
  sbtk::write_file((dir / "sim.json").string(), R"({"ticks": 10, "injections": [40]})");
  CHECK(cli("simulate " + (dir / "sim.json").string() + " -o " + (dir / "s").string()) == 2);
  CHECK(cli("--help") == 0);
}

TEST_CASE("cli outputs match the library") {
  const auto dir = testing::scratch_dir("cli_outputs");
  const auto square = testing::fixture("square_of_triangles.csv");
  REQUIRE(cli("homology " + square + " -o " + (dir / "b.json").string()) == 0);
  CHECK(slurp(dir / "b.json") == sbtk::cmd_homology(square, {}));
  REQUIRE(cli("entropy " + square + " -o " + (dir / "e.csv").string() + " --plot " + (dir / "e.gp").string()) == 0);
  CHECK(slurp(dir / "e.csv") == sbtk::cmd_entropy(square, {}, {}, 1));
  CHECK(slurp(dir / "e.gp").find("'e.csv'") != std::string::npos);
  REQUIRE(cli("hda " + (dir / "b.json").string() + " -o " + (dir / "hda").string()) == 0);
  CHECK(testing::snapshot(dir / "hda").size() == 8);

  REQUIRE(cli("--jobs 3 pipeline -o " + (dir / "cli").string()) == 0);
  sbtk::PipelineConfig pc;
  pc.sim = sbtk::SimConfig{};
  pc.out_dir = (dir / "lib").string();
  sbtk::cmd_pipeline(pc);
  CHECK(testing::snapshot(dir / "cli") == testing::snapshot(dir / "lib"));

  // The global seed flows into the simulator.
  REQUIRE(cli("--seed 5 simulate -o " + (dir / "seed5").string()) == 0);
  auto c = sbtk::SimConfig{};
  c.seed = 5;
  sbtk::cmd_simulate(c, (dir / "seed5_lib").string());
  CHECK(testing::snapshot(dir / "seed5") == testing::snapshot(dir / "seed5_lib"));
}
