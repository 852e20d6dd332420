// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace haps {

using nlohmann::json;

namespace {

const std::set<std::string> kSections = {"array",     "channel", "pattern", "system",
                                         "placement", "experiment", "power", "bisection"};

// ---- TOML subset -----------------------------------------------------------

class TomlReader {
 public:
  TomlReader(std::string_view text) : text_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    std::string section;
    while (!at_end()) {
      skip_blank_and_comments();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        if (peek() == '[') fail("arrays of tables are not supported");
        skip_inline_ws();
        section = read_key();
        skip_inline_ws();
        expect(']');
        end_of_line();
        if (root.contains(section)) fail("duplicate section [" + section + "]");
        root[section] = json::object();
        table = &root[section];
        continue;
      }
      const std::string key = read_key();
      skip_inline_ws();
      expect('=');
      skip_inline_ws();
      json value = read_value();
      end_of_line();
      if (table->contains(key)) fail("duplicate key '" + key + "'");
      (*table)[key] = std::move(value);
    }
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(std::min(pos_, text_.size())), '\n');
    throw ConfigError("", "line " + std::to_string(line) + ": " + msg);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_inline_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') ++pos_;
  }

  // Whitespace, newlines and comments (used between lines and inside arrays).
  void skip_blank_and_comments() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (!at_end() && peek() != '\n') fail("unexpected trailing characters");
  }

  std::string read_key() {
    if (peek() == '"') return read_string().get<std::string>();
    std::string key;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      key += text_[pos_++];
    if (key.empty()) fail("expected a key");
    if (peek() == '.') fail("dotted keys are not supported");
    return key;
  }

  json read_string() {
    const char quote = peek();
    ++pos_;
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      char c = text_[pos_++];
      if (c == quote) break;
      if (c == '\\' && quote == '"') {
        if (at_end()) fail("unterminated string");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out += c;
    }
    return out;
  }

  json read_array() {
    expect('[');
    json arr = json::array();
    while (true) {
      skip_blank_and_comments();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(read_value());
      skip_blank_and_comments();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  json read_value() {
    const char c = peek();
    if (c == '"' || c == '\'') return read_string();
    if (c == '[') return read_array();
    if (c == '{') fail("inline tables are not supported");
    std::string token;
    while (!at_end()) {
      const char t = peek();
      if (t == ',' || t == ']' || t == '#' || t == ' ' || t == '\t' || t == '\r' || t == '\n') break;
      token += t;
      ++pos_;
    }
    if (token == "true") return true;
    if (token == "false") return false;
    std::string digits;
    for (char t : token)
      if (t != '_') digits += t;
    if (digits.empty()) fail("expected a value");
    const bool is_float = digits.find_first_of(".eE") != std::string::npos || digits == "inf" ||
                          digits == "+inf" || digits == "-inf" || digits == "nan";
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(digits, &used);
        if (used == digits.size()) return v;
      } else if (digits[0] != '-') {
        const unsigned long long v = std::stoull(digits, &used, 10);
        if (used == digits.size()) return v;
      } else {
        const long long v = std::stoll(digits, &used, 10);
        if (used == digits.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail("invalid value '" + token + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---- key mapping -----------------------------------------------------------

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected an integer");
  const double d = v.get<double>();
  if (d != std::floor(d) || std::abs(d) > 2.0e9) throw ConfigError(key, "expected an integer");
  return static_cast<int>(d);
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, key));
  return out;
}

std::vector<std::pair<double, double>> as_xy_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected an array of [x, y] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2) throw ConfigError(key, "expected an array of [x, y] pairs");
    out.emplace_back(as_number(e[0], key), as_number(e[1], key));
  }
  return out;
}

ExperimentKind parse_experiment(const std::string& s) {
  static const std::array<std::pair<const char*, ExperimentKind>, 7> names = {{
      {"pipeline", ExperimentKind::Pipeline},
      {"heatmap", ExperimentKind::Heatmap},
      {"cdf", ExperimentKind::Cdf},
      {"sweep_power", ExperimentKind::SweepPower},
      {"sweep_k", ExperimentKind::SweepK},
      {"sweep_mk", ExperimentKind::SweepMk},
      {"beam_footprint", ExperimentKind::BeamFootprint},
  }};
  for (const auto& [name, kind] : names)
    if (s == name) return kind;
  throw ConfigError("experiment", "unknown experiment '" + s + "'");
}

PlacementKind parse_placement(const std::string& s) {
  if (s == "auto") return PlacementKind::Auto;
  if (s == "uniform") return PlacementKind::UniformRandom;
  if (s == "grid") return PlacementKind::SquareGrid;
  if (s == "explicit") return PlacementKind::Explicit;
  throw ConfigError("placement", "expected auto, uniform, grid or explicit");
}

Architecture arch_from(const json& v, const std::string& key) {
  try {
    return parse_architecture(as_string(v, key));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

json flatten(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "configuration must be an object");
  json flat = json::object();
  auto put = [&flat](const std::string& key, const json& value) {
    if (flat.contains(key)) throw ConfigError(key, "key given more than once");
    flat[key] = value;
  };
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      if (!kSections.count(key)) throw ConfigError(key, "unknown section");
      for (const auto& [inner, v] : value.items()) {
        if (v.is_object()) throw ConfigError(inner, "nested tables are not supported");
        put(inner, v);
      }
    } else {
      put(key, value);
    }
  }
  return flat;
}

ScenarioConfig from_flat(const json& flat) {
  ScenarioConfig c;
  bool have_p_w = false;
  bool have_p_dbm = false;
  for (const auto& [key, v] : flat.items()) {
    auto& a = c.array;
    auto& ch = c.channel;
    if (key == "architecture") c.architecture = arch_from(v, key);
    else if (key == "num_elements") a.num_elements = as_int(v, key);
    else if (key == "altitude_m") a.altitude_m = as_number(v, key);
    else if (key == "hemisphere_radius_m") a.hemisphere_radius_m = as_number(v, key);
    else if (key == "cyl_rings") a.cyl_rings = as_int(v, key);
    else if (key == "cyl_per_ring") a.cyl_per_ring = as_int(v, key);
    else if (key == "cyl_radius_m") a.cyl_radius_m = as_number(v, key);
    else if (key == "cyl_spacing_m") a.cyl_spacing_m = as_number(v, key);
    else if (key == "rect_rows") a.rect_rows = as_int(v, key);
    else if (key == "rect_cols") a.rect_cols = as_int(v, key);
    else if (key == "rect_spacing_m") a.rect_spacing_m = as_number(v, key);
    else if (key == "m_cyl") a.m_cyl = as_int(v, key);
    else if (key == "m_rect") a.m_rect = as_int(v, key);
    else if (key == "hyb_cyl_rings") a.hyb_cyl_rings = as_int(v, key);
    else if (key == "hyb_cyl_per_ring") a.hyb_cyl_per_ring = as_int(v, key);
    else if (key == "carrier_hz") ch.carrier_hz = as_number(v, key);
    else if (key == "eta_los_db") ch.eta_los_db = as_number(v, key);
    else if (key == "eta_nlos_db") ch.eta_nlos_db = as_number(v, key);
    else if (key == "env_a") ch.env_a = as_number(v, key);
    else if (key == "env_b") ch.env_b = as_number(v, key);
    else if (key == "plos_formula") {
      const std::string s = as_string(v, key);
      if (s == "standard") ch.plos_formula = PlosFormula::Standard;
      else if (s == "zenith_offset") ch.plos_formula = PlosFormula::ZenithOffset;
      else throw ConfigError(key, "expected standard or zenith_offset");
    }
    else if (key == "noise_figure_db") c.noise_figure_db = as_number(v, key);
    else if (key == "noise_psd_dbm_hz") c.noise_psd_dbm_hz = as_number(v, key);
    else if (key == "theta_3db") c.pattern.theta_3db_deg = as_number(v, key);
    else if (key == "gamma_max_db") c.pattern.gamma_max_db = as_number(v, key);
    else if (key == "num_users") c.num_users = as_int(v, key);
    else if (key == "m_k") c.m_k = as_int(v, key);
    else if (key == "m_element_cap") c.m_element_cap = as_int(v, key);
    else if (key == "p_haps_w") {
      c.p_haps_w = as_number(v, key);
      have_p_w = true;
    } else if (key == "p_haps_dbm") {
      c.p_haps_w = dbm_to_watt(as_number(v, key));
      have_p_dbm = true;
    }
    else if (key == "bandwidth_hz") c.bandwidth_hz = as_number(v, key);
    else if (key == "area_side_m") c.area_side_m = as_number(v, key);
    else if (key == "seed") {
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
        throw ConfigError(key, "expected a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    }
    else if (key == "placement") c.placement.kind = parse_placement(as_string(v, key));
    else if (key == "placement_count") c.placement.count = as_int(v, key);
    else if (key == "grid_n") c.placement.grid_n = as_int(v, key);
    else if (key == "users") c.placement.explicit_xy = as_xy_list(v, key);
    else if (key == "experiment") c.experiment.kind = parse_experiment(as_string(v, key));
    else if (key == "sweep") c.experiment.sweep = as_number_list(v, key);
    else if (key == "schemes") {
      if (!v.is_array()) throw ConfigError(key, "expected an array of architecture names");
      for (const auto& e : v) c.experiment.schemes.push_back(arch_from(e, key));
    }
    else if (key == "cdf_mode") {
      const std::string s = as_string(v, key);
      if (s == "probe") c.experiment.cdf_mode = CdfMode::Probe;
      else if (s == "beams") c.experiment.cdf_mode = CdfMode::Beams;
      else throw ConfigError(key, "expected probe or beams");
    }
    else if (key == "beam_centers") c.experiment.beam_centers = as_xy_list(v, key);
    else if (key == "beam_m_k") {
      for (double d : as_number_list(v, key)) c.experiment.beam_m_k.push_back(as_int(d, key));
    }
    else if (key == "power_mode") {
      const std::string s = as_string(v, key);
      if (s == "maxmin") c.power_mode = PowerMode::MaxMin;
      else if (s == "fixed") c.power_mode = PowerMode::FixedPerUser;
      else throw ConfigError(key, "expected maxmin or fixed");
    }
    else if (key == "fixed_power_w") c.fixed_power_w = as_number(v, key);
    else if (key == "eta_min") c.bisection.eta_min = as_number(v, key);
    else if (key == "eta_max") c.bisection.eta_max = as_number(v, key);
    else if (key == "epsilon") c.bisection.epsilon = as_number(v, key);
    else throw ConfigError(key, "unknown key");
  }
  if (have_p_w && have_p_dbm) throw ConfigError("p_haps_dbm", "give either p_haps_w or p_haps_dbm, not both");
  return c;
}

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

void check_geometry(const ScenarioConfig& c, Architecture arch) {
  try {
    (void)build_array(arch, c.array);
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    const auto space = msg.find(' ');
    throw ConfigError(msg.substr(0, space), std::string(to_string(arch)) + ": " + msg);
  }
}

}  // namespace

json parse_toml_subset(std::string_view text) { return TomlReader(text).parse(); }

void validate(const ScenarioConfig& c) {
  const int M = c.array.num_elements;
  require(M > 0, "num_elements", "must be positive");
  require(c.array.altitude_m > 0.0, "altitude_m", "must be positive");
  require(c.channel.carrier_hz > 0.0, "carrier_hz", "must be positive");
  require(std::isfinite(c.channel.eta_los_db), "eta_los_db", "must be finite");
  require(std::isfinite(c.channel.eta_nlos_db), "eta_nlos_db", "must be finite");
  require(c.channel.env_a > 0.0, "env_a", "must be positive");
  require(c.channel.env_b > 0.0, "env_b", "must be positive");
  require(std::isfinite(c.noise_figure_db), "noise_figure_db", "must be finite");
  require(std::isfinite(c.noise_psd_dbm_hz), "noise_psd_dbm_hz", "must be finite");
  require(c.pattern.theta_3db_deg > 0.0 && c.pattern.theta_3db_deg <= 180.0, "theta_3db",
          "must be in (0, 180] degrees");
  require(c.pattern.gamma_max_db >= 0.0, "gamma_max_db", "must be non-negative");
  require(c.num_users >= 1, "num_users", "must be at least 1");
  require(c.m_k >= 1 && c.m_k <= M, "m_k", "must be in [1, num_elements]");
  require(c.m_element_cap >= 0, "m_element_cap", "must be non-negative");
  if (c.m_element_cap > 0)
    require(static_cast<long long>(c.num_users) * c.m_k <= static_cast<long long>(M) * c.m_element_cap,
            "m_element_cap", "num_users * m_k exceeds num_elements * m_element_cap");
  require(c.p_haps_w > 0.0 && std::isfinite(c.p_haps_w), "p_haps_w", "must be positive");
  require(c.bandwidth_hz > 0.0, "bandwidth_hz", "must be positive");
  require(c.area_side_m > 0.0, "area_side_m", "must be positive");
  require(c.fixed_power_w > 0.0, "fixed_power_w", "must be positive");
  require(c.placement.count >= 0, "placement_count", "must be non-negative");
  require(c.placement.grid_n >= 1, "grid_n", "must be at least 1");
  if (c.placement.kind == PlacementKind::Explicit)
    require(!c.placement.explicit_xy.empty(), "users", "explicit placement needs at least one user");
  require(c.bisection.eta_min >= 0.0, "eta_min", "must be non-negative");
  require(c.bisection.eta_max > c.bisection.eta_min, "eta_max", "must exceed eta_min");
  require(c.bisection.epsilon > 0.0, "epsilon", "must be positive");

  const auto kind = c.experiment.kind;
  const auto& sweep = c.experiment.sweep;
  const bool is_sweep = kind == ExperimentKind::SweepPower || kind == ExperimentKind::SweepK ||
                        kind == ExperimentKind::SweepMk;
  if (is_sweep) {
    require(!sweep.empty(), "sweep", "must be non-empty for sweep experiments");
    for (std::size_t i = 1; i < sweep.size(); ++i)
      require(sweep[i] > sweep[i - 1], "sweep", "values must be strictly increasing");
    for (double v : sweep) {
      require(std::isfinite(v), "sweep", "values must be finite");
      if (kind == ExperimentKind::SweepK)
        require(v >= 1.0 && v == std::floor(v), "sweep", "num_users values must be positive integers");
      if (kind == ExperimentKind::SweepMk)
        require(v >= 1.0 && v <= M && v == std::floor(v), "sweep",
                "m_k values must be integers in [1, num_elements]");
    }
  }
  for (int mk : c.experiment.beam_m_k) require(mk >= 1 && mk <= M, "beam_m_k", "values must be in [1, num_elements]");

  std::set<Architecture> archs = {c.architecture};
  if (kind == ExperimentKind::Cdf && c.experiment.schemes.empty())
    archs = {Architecture::Hemispherical, Architecture::Cylindrical, Architecture::Rectangular,
             Architecture::Hybrid};
  for (Architecture a : c.experiment.schemes) archs.insert(a);
  for (Architecture a : archs) check_geometry(c, a);
}

ScenarioConfig parse_config(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  json doc;
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
  } else {
    doc = parse_toml_subset(text);
  }
  ScenarioConfig config = from_flat(flatten(doc));
  validate(config);
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["architecture"] = std::string(to_string(c.architecture));
  const auto& a = c.array;
  j["num_elements"] = a.num_elements;
  j["altitude_m"] = a.altitude_m;
  j["hemisphere_radius_m"] = a.hemisphere_radius_m;
  j["cyl_rings"] = a.cyl_rings;
  j["cyl_per_ring"] = a.cyl_per_ring;
  j["cyl_radius_m"] = a.cyl_radius_m;
  j["cyl_spacing_m"] = a.cyl_spacing_m;
  j["rect_rows"] = a.rect_rows;
  j["rect_cols"] = a.rect_cols;
  j["rect_spacing_m"] = a.rect_spacing_m;
  j["m_cyl"] = a.m_cyl;
  j["m_rect"] = a.m_rect;
  j["hyb_cyl_rings"] = a.hyb_cyl_rings;
  j["hyb_cyl_per_ring"] = a.hyb_cyl_per_ring;
  const auto& ch = c.channel;
  j["carrier_hz"] = ch.carrier_hz;
  j["eta_los_db"] = ch.eta_los_db;
  j["eta_nlos_db"] = ch.eta_nlos_db;
  j["env_a"] = ch.env_a;
  j["env_b"] = ch.env_b;
  j["plos_formula"] = ch.plos_formula == PlosFormula::Standard ? "standard" : "zenith_offset";
  j["noise_figure_db"] = c.noise_figure_db;
  j["noise_psd_dbm_hz"] = c.noise_psd_dbm_hz;
  j["theta_3db"] = c.pattern.theta_3db_deg;
  j["gamma_max_db"] = c.pattern.gamma_max_db;
  j["num_users"] = c.num_users;
  j["m_k"] = c.m_k;
  j["m_element_cap"] = c.m_element_cap;
  j["p_haps_w"] = c.p_haps_w;
  j["bandwidth_hz"] = c.bandwidth_hz;
  j["area_side_m"] = c.area_side_m;
  j["seed"] = c.seed;
  j["placement"] = std::string(to_string(c.placement.kind));
  j["placement_count"] = c.placement.count;
  j["grid_n"] = c.placement.grid_n;
  json users = json::array();
  for (const auto& [x, y] : c.placement.explicit_xy) users.push_back({x, y});
  j["users"] = users;
  j["experiment"] = std::string(to_string(c.experiment.kind));
  j["sweep"] = c.experiment.sweep;
  json schemes = json::array();
  for (Architecture s : c.experiment.schemes) schemes.push_back(std::string(to_string(s)));
  j["schemes"] = schemes;
  j["cdf_mode"] = std::string(to_string(c.experiment.cdf_mode));
  json centers = json::array();
  for (const auto& [x, y] : c.experiment.beam_centers) centers.push_back({x, y});
  j["beam_centers"] = centers;
  j["beam_m_k"] = c.experiment.beam_m_k;
  j["power_mode"] = c.power_mode == PowerMode::MaxMin ? "maxmin" : "fixed";
  j["fixed_power_w"] = c.fixed_power_w;
  j["eta_min"] = c.bisection.eta_min;
  j["eta_max"] = c.bisection.eta_max;
  j["epsilon"] = c.bisection.epsilon;
  return j;
}

std::string config_hash(const ScenarioConfig& config) { return sha256_hex(to_json(config).dump()); }

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace haps
