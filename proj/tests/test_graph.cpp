#include <doctest.h>

#include <filesystem>

#include "sbtk/error.hpp"
#include "sbtk/format.hpp"
#include "sbtk/graph.hpp"
#include "support.hpp"

using namespace sbtk;
namespace fs = std::filesystem;

TEST_CASE("edge list parsing") {
  SUBCASE("comments, blanks and isolated vertices") {
    auto g = parse_edge_list("# header\n0,1,2.5\n\n 1 , 2 , 1\n7\n");
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 2);
    CHECK(g.weight(1, 0) == 2.5);
    CHECK(g.has_vertex(7));
    CHECK_FALSE(g.weight(0, 2));
  }
  SUBCASE("endpoints are normalised") {
    auto g = parse_edge_list("5,2,1\n");
    REQUIRE(g.edges().size() == 1);
    CHECK(g.edges()[0] == Edge{2, 5, 1.0});
  }
  SUBCASE("errors carry the line") {
    CHECK_THROWS_WITH_AS(parse_edge_list("0,1,1\n1,0,2\n", "g.csv"), doctest::Contains("g.csv:2"), DuplicateEdge);
    CHECK_THROWS_AS(parse_edge_list("3,3,1\n"), SelfLoop);
    CHECK_THROWS_AS(parse_edge_list("0,1,0\n"), NonPositiveWeight);
    CHECK_THROWS_AS(parse_edge_list("0,1,-2\n"), NonPositiveWeight);
    CHECK_THROWS_AS(parse_edge_list("0,1,nan\n"), NonPositiveWeight);
    CHECK_THROWS_AS(parse_edge_list("0,1,inf\n"), NonPositiveWeight);
    CHECK_THROWS_AS(parse_edge_list("0,1,abc\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0,1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("a,1,1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("-1,1,1\n"), ParseError);
  }
  SUBCASE("all errors are data errors") { CHECK_THROWS_AS(parse_edge_list("0,0,1\n"), DataError); }
}

TEST_CASE("edge list round trip is exact") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto g = testing::random_graph(rng, 8, true);
    g.add_vertex(100);
    auto back = parse_edge_list(format_edge_list(g));
    CHECK(back == g);
    for (const auto& e : g.edges()) CHECK(back.weight(e.u, e.v) == e.weight);
  }
}

TEST_CASE("symmetric matrix import") {
  auto g = from_symmetric_matrix({{0, 2, 0}, {2, 0, 0.5}, {0, 0.5, 0}}, 0.0);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.weight(1, 2) == 0.5);
  CHECK(from_symmetric_matrix({{0, 2, 0}, {2, 0, 0.5}, {0, 0.5, 0}}, 1.0).edge_count() == 1);
  CHECK_THROWS_AS(from_symmetric_matrix({{0, 1}, {2, 0}}, 0.0), NotSymmetric);
  CHECK_THROWS_AS(from_symmetric_matrix({{0, 1}, {1}}, 0.0), NotSquare);
  CHECK_NOTHROW(from_symmetric_matrix({{0, 1}, {1 + 1e-12, 0}}, 0.0));
}

TEST_CASE("observation series") {
  ObservationSeries s;
  s.append(0, parse_edge_list("0,1,1\n"));
  s.append(5, parse_edge_list("0,1,2\n1,2,1\n"));
  CHECK_THROWS_AS(s.append(5, WeightedGraph{}), UnorderedTicks);
  CHECK_THROWS_AS(s.append(3, WeightedGraph{}), UnorderedTicks);

  SUBCASE("json round trip") {
    auto back = series_from_json(series_to_json(s));
    REQUIRE(back.size() == 2);
    CHECK(back.observations()[1].tick == 5);
    CHECK(back.observations()[1].graph == s.observations()[1].graph);
  }
  SUBCASE("directory round trip keeps names and numeric tick order") {
    ObservationSeries named;
    for (Tick t : {0, 5, 10, 100}) {
      auto g = parse_edge_list("256,3839,1\n");
      g.set_name(256, "Ab256");
      named.append(t, g);
    }
    const auto dir = fs::temp_directory_path() / "sbtk_series_rt";
    fs::remove_all(dir);
    save_series_directory(named, dir.string());
    CHECK(fs::exists(dir / "obs_100.csv"));
    auto back = load_series_directory(dir.string());
    REQUIRE(back.size() == 4);
    CHECK(back.observations()[3].tick == 100);
    CHECK(back.observations()[2].tick == 10);
    CHECK(back.observations()[0].graph.label(256) == "Ab256");
    CHECK(back.observations()[0].graph.label(3839) == "3839");
    fs::remove_all(dir);
  }
  CHECK(observation_file_name(45) == "obs_45.csv");
}
