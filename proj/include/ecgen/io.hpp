#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecgen/curve.hpp"
#include "ecgen/endo.hpp"

namespace ecgen {

// Flat key = value text, '#' comments, order preserved.
struct KvFile {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string raw;

  static KvFile parse(const std::string& text);
  static KvFile load(const std::string& path);  // IoError on failure
  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;
};

// "[a, b, c]" or "a,b,c"
std::vector<int64_t> parse_int_list(const std::string& text);
std::string format_int_list(const std::vector<int64_t>& v);

// Curve file: field spec (p, k, modulus) plus a1..a6 as coordinate
// vectors; the cached quantities (n_points, trace, v, D_K) are written
// back on save and cross-checked on load when present.
Curve load_curve(const std::string& path);
Curve curve_from_kv(const KvFile& kv);
std::string curve_to_text(const Curve& E);
void save_curve(const Curve& E, const std::string& path);

struct RunConfig {
  std::string curve_path;
  std::string point_spec;  // "[x];[y]" coordinates or "search:order=l"
  Rational tau_x = Rational::of(1);
  Rational tau_y = Rational::of(0);
  std::string observable = "x";
  std::vector<std::string> analyses = {"expsum", "discrepancy", "lincomp"};
  std::vector<int> nu_list = {1};
  int64_t character_j = 1;
  bool boxes_all = true;
  int64_t box_samples = 200;
  std::vector<int> coord_subset;
  std::string out_prefix = "run";
  uint64_t seed = 20170001;  // fixed default for reproducibility
  int64_t budget = kEnumBudget;
  double epsilon = 0.1;
  int64_t length = 0;  // 0 = one full period
  std::string raw_text;

  static RunConfig load(const std::string& path);
  static RunConfig parse(const std::string& text);
};

uint64_t fnv1a(const std::string& s);
std::string config_hash_hex(const std::string& raw);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace ecgen
