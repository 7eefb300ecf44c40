#include <doctest.h>

#include <random>
#include <sstream>

#include "ellracah/error.hpp"
#include "ellracah/io.hpp"
#include "ellracah/sampling.hpp"

using namespace ellracah;

TEST_CASE("config: name = value lines, comments and blanks") {
  std::istringstream in("# desk set\n\nu1 = 1.3\n  M=5  \np = 0.05\ncommand = verify\n");
  const auto entries = parse_config(in);
  REQUIRE(entries.size() == 4);
  CHECK(entries[0].key == "u1");
  CHECK(entries[0].value == "1.3");
  CHECK(entries[1].key == "M");
  CHECK(entries[1].line == 4);
  RawParams raw;
  for (const auto& e : entries) apply_param(raw, e.key, e.value);
  CHECK(raw.u[0] == 1.3);
  CHECK(raw.M == 5);
  CHECK(raw.p == 0.05);
}

TEST_CASE("config: malformed input") {
  std::istringstream dup("p = 0.1\np = 0.2\n");
  CHECK_THROWS_AS(parse_config(dup), Error);
  std::istringstream noeq("u1 1.3\n");
  CHECK_THROWS_AS(parse_config(noeq), Error);
  std::istringstream empty("u1 =\n");
  CHECK_THROWS_AS(parse_config(empty), Error);
  RawParams raw;
  CHECK_THROWS_AS(apply_param(raw, "u1", "1.3x"), Error);
  CHECK_THROWS_AS(apply_param(raw, "M", "2.5"), Error);
  CHECK_FALSE(apply_param(raw, "colour", "red"));
  CHECK_THROWS_AS(read_config("/nonexistent/config.txt"), Error);
}

TEST_CASE("numbers: parsing and shortest round trip") {
  CHECK(parse_double("1e-3", "x") == 1e-3);
  CHECK_THROWS_AS(parse_double("nan", "x"), Error);
  CHECK(parse_double_list("0.01, 0.005,0.0025", "s") == std::vector<double>{0.01, 0.005, 0.0025});
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-6) == "1e-06");
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(gen);
    CHECK(parse_double(format_double(x), "x") == x);
  }
}

TEST_CASE("csv: header and row width") {
  std::ostringstream os;
  CsvWriter w(os, {"p", "j"});
  w.cell(0.25).cell(3);
  w.end_row();
  CHECK(os.str() == "p,j\n0.25,3\n");
  w.cell(1.0);
  CHECK_THROWS_AS(w.end_row(), Error);
}

TEST_CASE("json: parameters echoed verbatim") {
  const auto params = validate(desk_params());
  const auto j = to_json(params);
  CHECK(j["u"][0].get<double>() == 1.3);
  CHECK(j["v"][1].get<double>() == -0.3);
  CHECK(j["M"].get<int>() == 5);
  CHECK(j["alpha"].get<double>() == params.alpha());
  // Round trip through text keeps every bit.
  const auto back = nlohmann::json::parse(j.dump());
  CHECK(back["alpha"].get<double>() == params.alpha());
}
