#include <doctest.h>

#include <cstdio>

#include "ecgen/io.hpp"

using namespace ecgen;

TEST_CASE("kv parsing") {
  KvFile kv = KvFile::parse("a = 1\n# comment\n b = [2, 3] # trailing\n\n");
  CHECK(kv.require("a") == "1");
  CHECK(kv.require("b") == "[2, 3]");
  CHECK(!kv.get("c"));
  CHECK_THROWS_AS((void)kv.require("c"), InvalidConfiguration);
  CHECK_THROWS_AS(KvFile::parse("just a line\n"), InvalidConfiguration);
  CHECK_THROWS_AS(KvFile::load("/nonexistent/path.cfg"), IoError);
}

TEST_CASE("int list parsing") {
  CHECK(parse_int_list("[1,2,3]") == std::vector<int64_t>{1, 2, 3});
  CHECK(parse_int_list("4, -5") == std::vector<int64_t>{4, -5});
  CHECK(parse_int_list("[]").empty());
  CHECK(format_int_list({1, -2}) == "[1,-2]");
  CHECK_THROWS_AS(parse_int_list("[1, x]"), InvalidConfiguration);
}

TEST_CASE("curve file round trip with cached values") {
  FieldSpec F(5, 1, {0});
  Curve E(F, F.zero(), F.zero(), F.zero(), F.one(), F.one());
  std::string path = "test_roundtrip.curve";
  save_curve(E, path);
  Curve E2 = load_curve(path);
  CHECK(E2.n_points() == 9);
  CHECK(E2.trace() == -3);
  CHECK(E2.D_K() == -11);
  std::remove(path.c_str());

  // stale cached values are rejected
  std::string text = curve_to_text(E);
  auto pos = text.find("trace = -3");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 10, "trace = -2");
  CHECK_THROWS_AS((void)curve_from_kv(KvFile::parse(text)), InvalidConfiguration);
}

TEST_CASE("run config defaults and parsing") {
  RunConfig cfg = RunConfig::parse(
      "curve = a.curve\npoint = search:order=9\ntau = [2,1,1,1]\n"
      "observable = y\nnu = [1,3]\nboxes = sample:50\nseed = 7\n");
  CHECK(cfg.curve_path == "a.curve");
  CHECK(cfg.tau_x.num == 2);
  CHECK(cfg.tau_y.num == 1);
  CHECK(cfg.observable == "y");
  CHECK(cfg.nu_list == std::vector<int>{1, 3});
  CHECK(!cfg.boxes_all);
  CHECK(cfg.box_samples == 50);
  CHECK(cfg.seed == 7);
  CHECK_THROWS_AS(RunConfig::parse("point = x\n"), InvalidConfiguration);
  CHECK_THROWS_AS(
      RunConfig::parse("curve = a\npoint = b\nboxes = sometimes\n"),
      InvalidConfiguration);
  CHECK_THROWS_AS(RunConfig::parse("curve = a\npoint = b\ntau = [1,2]\n"),
                  InvalidConfiguration);
}

TEST_CASE("config hash is stable and content sensitive") {
  CHECK(config_hash_hex("abc") == config_hash_hex("abc"));
  CHECK(config_hash_hex("abc") != config_hash_hex("abd"));
  CHECK(config_hash_hex("abc").size() == 16);
}
