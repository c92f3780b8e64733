#pragma once

// INI-style run configuration: [section] headers, key = value lines, '#'
// comments, values optionally wrapped in double quotes.

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "degen/analysis.hpp"
#include "degen/error.hpp"
#include "degen/field.hpp"
#include "degen/levelset.hpp"

namespace degen {

enum class Mode { Plane, Sphere };

struct FieldText {
  std::string f, e1, e2;
};

struct Config {
  Mode mode = Mode::Plane;
  std::optional<FieldText> fields;
  std::optional<FieldText> north;  // explicit two-chart input
  std::optional<FieldText> south;
  bool family = false;
  double s_min = 0.0;
  double s_max = 1.0;
  Domain domain;
  AnalysisOptions analysis;

  bool explicit_charts() const { return north.has_value(); }
};

using IniSections = std::map<std::string, std::map<std::string, std::string>>;

namespace detail {

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double to_double(const std::string& where, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    config_error(where + ": expected a number, got '" + v + "'");
  return out;
}

inline int to_int(const std::string& where, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) config_error(where + ": expected an integer, got '" + v + "'");
  return out;
}

inline bool to_bool(const std::string& where, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  config_error(where + ": expected true or false, got '" + v + "'");
}

}  // namespace detail

inline IniSections parse_ini(std::string_view text) {
  IniSections out;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno);
    std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') detail::config_error(where + ": malformed section header");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (out.count(section)) detail::config_error(where + ": duplicate section [" + section + "]");
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) detail::config_error(where + ": expected key = value");
    if (section.empty()) detail::config_error(where + ": key outside of a section");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (!value.empty() && value.front() == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string::npos) detail::config_error(where + ": unterminated quote");
      const std::string rest = detail::trim(std::string_view(value).substr(close + 1));
      if (!rest.empty() && rest.front() != '#') detail::config_error(where + ": text after closing quote");
      value = value.substr(1, close - 1);
    } else if (const auto hash = value.find('#'); hash != std::string::npos) {
      value = detail::trim(std::string_view(value).substr(0, hash));
    }
    if (key.empty()) detail::config_error(where + ": empty key");
    if (!out[section].emplace(key, value).second)
      detail::config_error(where + ": duplicate key '" + key + "' in [" + section + "]");
  }
  return out;
}

namespace detail {

inline FieldText read_fields(const std::map<std::string, std::string>& sec, const std::string& name) {
  FieldText ft;
  for (auto [key, dst] : {std::pair{"f", &ft.f}, std::pair{"E1", &ft.e1}, std::pair{"E2", &ft.e2}}) {
    const auto it = sec.find(key);
    if (it == sec.end()) config_error("[" + name + "] is missing " + key);
    *dst = it->second;
    try {
      (void)Expr::parse(*dst);
    } catch (const Error& err) {
      config_error("[" + name + "] " + key + ": " + err.what());
    }
  }
  return ft;
}

}  // namespace detail

inline Config parse_config(std::string_view text) {
  const IniSections ini = parse_ini(text);
  static const std::map<std::string, std::set<std::string>> allowed{
      {"analysis", {"mode"}},
      {"fields", {"f", "E1", "E2", "family", "s_min", "s_max"}},
      {"north", {"f", "E1", "E2"}},
      {"south", {"f", "E1", "E2"}},
      {"domain", {"xmin", "xmax", "ymin", "ymax", "grid_n"}},
      {"tolerances",
       {"eps_f", "eps_regular_rel", "max_subdivision_depth", "max_components", "eps_reducible", "eps_E_rel",
        "min_samples", "eps_zero", "zero_clearance"}},
  };
  for (const auto& [sec, keys] : ini) {
    const auto a = allowed.find(sec);
    if (a == allowed.end()) detail::config_error("unknown section [" + sec + "]");
    for (const auto& [k, v] : keys)
      if (!a->second.count(k)) detail::config_error("unknown key '" + k + "' in [" + sec + "]");
  }
  auto get = [&](const std::string& sec, const std::string& key) -> std::optional<std::string> {
    const auto s = ini.find(sec);
    if (s == ini.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  };

  Config c;
  if (auto m = get("analysis", "mode")) {
    if (*m == "plane") c.mode = Mode::Plane;
    else if (*m == "sphere") c.mode = Mode::Sphere;
    else detail::config_error("[analysis] mode must be plane or sphere, got '" + *m + "'");
  }
  const bool has_north = ini.count("north") > 0, has_south = ini.count("south") > 0;
  if (has_north != has_south) detail::config_error("[north] and [south] must be given together");
  if (has_north) {
    if (c.mode != Mode::Sphere) detail::config_error("[north]/[south] charts require mode = sphere");
    if (ini.count("fields")) detail::config_error("use either [fields] or [north]/[south], not both");
    c.north = detail::read_fields(ini.at("north"), "north");
    c.south = detail::read_fields(ini.at("south"), "south");
  } else {
    if (!ini.count("fields")) detail::config_error("missing section [fields]");
    c.fields = detail::read_fields(ini.at("fields"), "fields");
    if (auto v = get("fields", "family")) c.family = detail::to_bool("[fields] family", *v);
    if (auto v = get("fields", "s_min")) c.s_min = detail::to_double("[fields] s_min", *v);
    if (auto v = get("fields", "s_max")) c.s_max = detail::to_double("[fields] s_max", *v);
    if (c.family && !(c.s_min < c.s_max)) detail::config_error("[fields] s_min must be < s_max");
  }

  if (auto v = get("domain", "xmin")) c.domain.xmin = detail::to_double("[domain] xmin", *v);
  if (auto v = get("domain", "xmax")) c.domain.xmax = detail::to_double("[domain] xmax", *v);
  if (auto v = get("domain", "ymin")) c.domain.ymin = detail::to_double("[domain] ymin", *v);
  if (auto v = get("domain", "ymax")) c.domain.ymax = detail::to_double("[domain] ymax", *v);
  if (auto v = get("domain", "grid_n")) c.domain.grid_n = detail::to_int("[domain] grid_n", *v);
  try {
    c.domain.validate();
  } catch (const Error& err) {
    detail::config_error(std::string("[domain] ") + err.what());
  }

  auto& a = c.analysis;
  auto tol = [&](const char* key, auto& dst) {
    if (auto v = get("tolerances", key)) {
      const std::string where = std::string("[tolerances] ") + key;
      using T = std::decay_t<decltype(dst)>;
      if constexpr (std::is_floating_point_v<T>) {
        dst = detail::to_double(where, *v);
        if (!(dst > 0.0)) detail::config_error(where + " must be positive");
      } else {
        const int n = detail::to_int(where, *v);
        if (n <= 0) detail::config_error(where + " must be positive");
        dst = static_cast<T>(n);
      }
    }
  };
  tol("eps_f", a.level_set.eps_f);
  tol("eps_regular_rel", a.level_set.eps_regular_rel);
  tol("max_subdivision_depth", a.level_set.max_subdivision_depth);
  tol("max_components", a.level_set.max_components);
  tol("eps_reducible", a.ring_index.eps_reducible);
  tol("eps_E_rel", a.ring_index.eps_E_rel);
  tol("min_samples", a.ring_index.min_samples);
  tol("eps_zero", a.zeros.eps_zero);
  tol("zero_clearance", a.zero_clearance);
  return c;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::config_error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace degen
