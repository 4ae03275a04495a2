#include <doctest.h>

#include <filesystem>

#include "sbtk/format.hpp"
#include "sbtk/pipeline.hpp"
#include "support.hpp"

using namespace sbtk;
namespace fs = std::filesystem;

namespace {

ObservationSeries single_edge_series(std::size_t n) {
  ObservationSeries s;
  for (std::size_t i = 0; i < n; ++i) {
    WeightedGraph g;
    g.add_edge(0, 1, 1.0);
    s.append(i * 5, g);
  }
  return s;
}

}  // namespace

TEST_CASE("stage commands on the small fixture") {
  const auto path = testing::fixture("square_of_triangles.csv");
  auto b = barcode_from_json(nlohmann::json::parse(cmd_homology(path, {})));
  REQUIRE(b.intervals.size() == 2);
  CHECK(b.intervals[0].birth == 0);
  CHECK_FALSE(b.intervals[0].death);
  CHECK(b.intervals[1].dimension == 1);
  CHECK(b.intervals[1].birth == 3);
  CHECK_FALSE(b.intervals[1].death);

  auto series = parse_entropy_csv(cmd_entropy(path, {}, {}, 1));
  REQUIRE(series.points.size() == 1);
  CHECK(series.points[0].h == doctest::Approx(0.5).epsilon(0.002));

  // Barcode JSON input gives the same value.
  const auto dir = testing::scratch_dir("fixture");
  write_file((dir / "b.json").string(), cmd_homology(path, {}));
  CHECK(cmd_entropy((dir / "b.json").string(), {}, {}, 1) == cmd_entropy(path, {}, {}, 1));

  CHECK(cmd_complex(path, WeightOrder::descending, 2).rfind("0;0\n", 0) == 0);
}

TEST_CASE("pipeline equals the composed stages") {
  const auto root = testing::scratch_dir("compose");
  PipelineConfig pc;
  pc.sim = SimConfig{};
  pc.out_dir = (root / "pipeline").string();
  const auto report = cmd_pipeline(pc);
  CHECK(report.observations == 41);
  CHECK(report.pea.states.size() >= 2);
  CHECK(report.hda_pairs > 0);

  const fs::path manual = root / "manual";
  const auto series = cmd_simulate(*pc.sim, (manual / "series").string());
  fs::create_directories(manual / "barcodes");
  for (const auto& obs : series.observations()) {
    write_file((manual / "barcodes" / barcode_file_name(obs.tick)).string(),
               cmd_homology((manual / "series" / observation_file_name(obs.tick)).string(), {}));
  }
  write_file((manual / "entropy.csv").string(), cmd_entropy((manual / "series").string(), {}, {}, 1));
  write_file((manual / "entropy.gp").string(), gnuplot_script("entropy.csv", "entropy.png"));
  auto pea = cmd_pea((manual / "entropy.csv").string(), {});
  write_file((manual / "pea.dot").string(), pea.dot);
  write_file((manual / "pea.json").string(), pea.json);
  fs::create_directories(manual / "hda");
  for (const auto& f : cmd_hda((manual / "barcodes" / barcode_file_name(series.observations().back().tick)).string())) {
    write_file((manual / "hda" / f.name).string(), f.content);
  }

  const auto expected = testing::snapshot(manual);
  CHECK(testing::snapshot(pc.out_dir) == expected);

  SUBCASE("job count does not change the output") {
    pc.out_dir = (root / "jobs4").string();
    pc.jobs = 4;
    cmd_pipeline(pc);
    CHECK(testing::snapshot(pc.out_dir) == expected);
  }
  SUBCASE("rerunning into the same directory is idempotent") {
    cmd_pipeline(pc);
    CHECK(testing::snapshot(pc.out_dir) == expected);
  }
}

TEST_CASE("pipeline from an existing series") {
  const auto root = testing::scratch_dir("series");
  const auto json_path = (root / "series.json").string();

  SUBCASE("no loops means no behaviour model") {
    write_file(json_path, series_to_json(single_edge_series(8)).dump());
    PipelineConfig pc;
    pc.series_path = json_path;
    pc.out_dir = (root / "out").string();
    const auto report = cmd_pipeline(pc);
    CHECK(report.pea.states.size() == 1);
    CHECK(report.hda_pairs == 0);
    REQUIRE(report.notes.size() == 1);
    CHECK(report.notes[0].find("NoGenerators") != std::string::npos);
  }
  SUBCASE("errors name their stage") {
    write_file(json_path, series_to_json(single_edge_series(3)).dump());
    PipelineConfig pc;
    pc.series_path = json_path;
    pc.out_dir = (root / "short").string();
    try {
      cmd_pipeline(pc);
      FAIL("expected a stage error");
    } catch (const StageError& e) {
      CHECK(e.stage() == "pea");
      CHECK(std::string(e.what()).rfind("pea: SeriesTooShort", 0) == 0);
    }
  }
  SUBCASE("missing input") {
    PipelineConfig pc;
    pc.series_path = (root / "absent.json").string();
    pc.out_dir = (root / "absent").string();
    CHECK_THROWS_AS(cmd_pipeline(pc), StageError);
    pc.series_path.clear();
    CHECK_THROWS_AS(cmd_pipeline(pc), StageError);
  }
}

TEST_CASE("parallel map") {
  auto squares = parallel_map<int>(100, 8, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == static_cast<int>(i * i));
  try {
    parallel_map<int>(50, 8, [](std::size_t i) -> int {
      if (i % 10 == 7) throw DataError("index " + std::to_string(i));
      return 0;
    });
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()) == "index 7");
  }
  CHECK(parallel_map<int>(0, 4, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("segment overrides") {
  auto s = make_entropy_series({{0, 0.0}, {5, 2.0}, {10, 2.0}});
  auto p = SegmentOverrides{}.resolve(s);
  CHECK(p.eps == doctest::Approx(0.1));
  CHECK(p.window == 5);
  CHECK(p.prominence == doctest::Approx(0.5));
  SegmentOverrides o;
  o.window = 3;
  o.eps = 0.01;
  p = o.resolve(s);
  CHECK(p.window == 3);
  CHECK(p.eps == 0.01);
  CHECK(p.prominence == doctest::Approx(0.5));
}
