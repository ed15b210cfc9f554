#include "ecgen/io.hpp"

#include <fstream>
#include <sstream>

namespace ecgen {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KvFile KvFile::parse(const std::string& text) {
  KvFile kv;
  kv.raw = text;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidConfiguration("config: expected key = value, got '" + line + "'");
    kv.entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

KvFile KvFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<std::string> KvFile::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::nullopt;
}

std::string KvFile::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw InvalidConfiguration("config: missing key '" + key + "'");
  return *v;
}

std::vector<int64_t> parse_int_list(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw InvalidConfiguration("list: unbalanced brackets");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<int64_t> out;
  std::istringstream in(t);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw InvalidConfiguration("list: bad integer '" + item + "'");
    }
  }
  return out;
}

std::string format_int_list(const std::vector<int64_t>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

Curve curve_from_kv(const KvFile& kv) {
  int64_t p = std::stoll(kv.require("p"));
  int k = std::stoi(kv.require("k"));
  FieldSpec F(p, k, parse_int_list(kv.require("modulus")));
  auto coeff = [&](const char* name) {
    return F.from_coords(parse_int_list(kv.require(name)));
  };
  Curve E(F, coeff("a1"), coeff("a2"), coeff("a3"), coeff("a4"), coeff("a6"));
  // cached values, when present, must agree with the recomputation
  auto check = [&](const char* key, int64_t actual) {
    auto v = kv.get(key);
    if (v && std::stoll(*v) != actual)
      throw InvalidConfiguration(std::string("curve file: stale cached ") + key);
  };
  check("n_points", E.n_points());
  check("trace", E.trace());
  check("v", E.v());
  check("D_K", E.D_K());
  return E;
}

Curve load_curve(const std::string& path) { return curve_from_kv(KvFile::load(path)); }

std::string curve_to_text(const Curve& E) {
  const FieldSpec& F = E.field();
  std::ostringstream out;
  out << "p = " << F.p() << "\n";
  out << "k = " << F.k() << "\n";
  out << "modulus = " << format_int_list(F.modulus()) << "\n";
  auto put = [&](const char* name, const Fe& a) {
    out << name << " = " << format_int_list(F.coords(a)) << "\n";
  };
  put("a1", E.a1());
  put("a2", E.a2());
  put("a3", E.a3());
  put("a4", E.a4());
  put("a6", E.a6());
  out << "# cached\n";
  out << "n_points = " << E.n_points() << "\n";
  out << "trace = " << E.trace() << "\n";
  out << "v = " << E.v() << "\n";
  out << "D_K = " << E.D_K() << "\n";
  return out.str();
}

void save_curve(const Curve& E, const std::string& path) {
  write_text_file(path, curve_to_text(E));
}

RunConfig RunConfig::parse(const std::string& text) {
  KvFile kv = KvFile::parse(text);
  RunConfig c;
  c.raw_text = text;
  c.curve_path = kv.require("curve");
  c.point_spec = kv.require("point");
  if (auto t = kv.get("tau")) {
    auto v = parse_int_list(*t);
    if (v.size() != 4) throw InvalidConfiguration("tau: want [xn,xd,yn,yd]");
    c.tau_x = Rational::of(v[0], v[1]);
    c.tau_y = Rational::of(v[2], v[3]);
  }
  if (auto o = kv.get("observable")) c.observable = *o;
  if (auto a = kv.get("analysis")) {
    c.analyses.clear();
    std::istringstream in(*a);
    std::string item;
    while (std::getline(in, item, ',')) c.analyses.push_back(trim(item));
  }
  if (auto n = kv.get("nu")) {
    c.nu_list.clear();
    for (int64_t x : parse_int_list(*n)) c.nu_list.push_back(static_cast<int>(x));
  }
  if (auto j = kv.get("j")) c.character_j = std::stoll(*j);
  if (auto b = kv.get("boxes")) {
    if (*b == "all") {
      c.boxes_all = true;
    } else if (b->rfind("sample:", 0) == 0) {
      c.boxes_all = false;
      c.box_samples = std::stoll(b->substr(7));
    } else {
      throw InvalidConfiguration("boxes: want all or sample:N");
    }
  }
  if (auto cs = kv.get("coords")) {
    c.coord_subset.clear();
    for (int64_t x : parse_int_list(*cs)) c.coord_subset.push_back(static_cast<int>(x));
  }
  if (auto o = kv.get("out")) c.out_prefix = *o;
  if (auto s = kv.get("seed")) c.seed = std::stoull(*s);
  if (auto b = kv.get("budget")) c.budget = std::stoll(*b);
  if (auto e = kv.get("epsilon")) c.epsilon = std::stod(*e);
  if (auto l = kv.get("length")) c.length = std::stoll(*l);
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  return parse(read_text_file(path));
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const std::string& raw) {
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx",
           static_cast<unsigned long long>(fnv1a(raw)));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ecgen
