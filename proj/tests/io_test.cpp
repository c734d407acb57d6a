#include "treequench/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "test_support.hpp"

using namespace treequench;

TEST_SUITE("io") {

TEST_CASE("csv doubles round-trip exactly") {
  const double values[] = {1.0 / 3.0, 0.1, 1e-17, 0.49999999999999994, 1.0};
  for (const double v : values) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("distribution json round-trips") {
  const Distribution d = make_distribution(2, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  const Distribution back = distribution_from_json(distribution_to_json(d));
  CHECK(back == d);
}

TEST_CASE("distribution json matches the documented shape") {
  const Distribution d = make_distribution(2, {0.5, 0.25, 0.25});
  CHECK(distribution_to_json(d) == "{\"k\":2,\"weights\":[0.5,0.25,0.25]}");
  CHECK(distribution_to_csv(d) == "0.5,0.25,0.25");
}

TEST_CASE("distribution json parse errors surface as invalid_argument") {
  CHECK_THROWS_AS(distribution_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json("{\"k\":2}"), std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json("{\"k\":2,\"weights\":[0.5,0.3]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(distribution_from_json("{\"k\":2,\"weights\":[\"a\",0.3,0.2]}"),
                  std::invalid_argument);
}

TEST_CASE("trajectory csv has a header and one row per step") {
  const Distribution d0 = make_distribution(2, {0.5, 0.3, 0.2});
  const TrajectoryRecord rec = iterate(d0, StandardRules{}, 5, 1e-300);
  std::ostringstream os;
  write_trajectory_csv(os, rec);
  const std::string text = os.str();
  CHECK(text.rfind("n,p1,p2,empty,z,y,diff\n", 0) == 0);
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + static_cast<int>(rec.steps.size()));
  CHECK(text.find("0,0.5,0.29999999999999999,0.20000000000000001") !=
        std::string::npos);
}

TEST_CASE("trajectory json carries the stop reason and diagnostics") {
  const Distribution d0 = make_distribution(2, {0.5, 0.3, 0.2});
  const TrajectoryRecord rec = iterate(d0, StandardRules{}, 100000, 1e-9);
  std::ostringstream os;
  write_trajectory_json(os, rec);
  const std::string text = os.str();
  CHECK(text.find("\"stop_reason\":\"Converged\"") != std::string::npos);
  CHECK(text.find("\"sorted_states\":[1,2]") != std::string::npos);
  CHECK(text.find("\"z\":") != std::string::npos);
  CHECK(text.find("\"diff\":") != std::string::npos);
}

TEST_CASE("histogram serialization") {
  RootHistogram h;
  h.counts = {5, 3, 2};
  h.total = 10;
  CHECK(histogram_to_json(h) ==
        "{\"counts\":[5,3,2],\"total\":10,\"empirical\":[0.5,0.29999999999999999,"
        "0.20000000000000001]}");
  std::ostringstream os;
  write_histogram_csv(os, h);
  CHECK(os.str() ==
        "state,count,empirical\n1,5,0.5\n2,3,0.29999999999999999\n"
        "3,2,0.20000000000000001\n");
}

TEST_CASE("combine tables load from json with 1-based indices") {
  const CombineTable t = combine_table_from_json(
      "{\"k\": 2, \"entries\": [[1,3,1],[3,2,2],[1,2,3]]}");
  CHECK(t.k() == 2);
  CHECK(t.parent(1, 1) == 1);
  CHECK(t.parent(1, 2) == 3);
  CHECK(t.parent(3, 2) == 2);
  CHECK(t == CombineTable(2, {{1, 3, 1}, {3, 2, 2}, {1, 2, 3}}));
}

TEST_CASE("combine table json errors surface as invalid_argument") {
  CHECK_THROWS_AS(combine_table_from_json("nope"), std::invalid_argument);
  CHECK_THROWS_AS(combine_table_from_json("{\"k\":2}"), std::invalid_argument);
  // asymmetric
  CHECK_THROWS_AS(
      combine_table_from_json("{\"k\":1,\"entries\":[[1,1],[2,2]]}"),
      std::invalid_argument);
  // entry out of range
  CHECK_THROWS_AS(
      combine_table_from_json("{\"k\":1,\"entries\":[[1,5],[5,2]]}"),
      std::invalid_argument);
}

TEST_CASE("combine tables load from a file") {
  const char* path = "io_test_table.json";
  {
    std::ofstream f(path);
    f << "{\"k\": 1, \"entries\": [[1, 1], [1, 2]]}";
  }
  const CombineTable t = load_combine_table(path);
  CHECK(t.parent(2, 1) == 1);
  std::remove(path);
  CHECK_THROWS_AS(load_combine_table("does_not_exist.json"), std::invalid_argument);
}

}  // TEST_SUITE
