#ifndef PACSLAB_CLI_CONFIG_HPP
#define PACSLAB_CLI_CONFIG_HPP

// Run configuration: command-line flags layered over an optional flat
// `key = value` file. Flags win. Every malformed or unknown entry is
// collected before a single ValidationError is raised.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "pacslab/errors.hpp"
#include "pacslab/fock.hpp"

namespace pacslab::cli {

enum class Scenario { jc_curve, dc_overlap, dc_pm, dc_ideal_check, verify };
enum class OutputFormat { csv, json };

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::jc_curve: return "jc-curve";
    case Scenario::dc_overlap: return "dc-overlap";
    case Scenario::dc_pm: return "dc-pm";
    case Scenario::dc_ideal_check: return "dc-ideal-check";
    case Scenario::verify: return "verify";
  }
  return "unknown";
}

inline std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

/// Evenly spaced values start..stop (inclusive), `count` points.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
      v[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
  }

  bool operator==(const Grid&) const = default;
};

struct RunConfig {
  Scenario scenario = Scenario::verify;
  cplx alpha{0.8, 0.0};
  std::optional<Grid> beta_t;
  std::optional<double> beta;  ///< rad/s, multiplies the t grid
  std::optional<Grid> t;       ///< seconds
  std::optional<Grid> r;
  double phi = 0.0;
  std::vector<unsigned> m_list;
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  double tol = NumericConfig{}.evolution_tol;
  std::string out;  ///< empty: stdout
  OutputFormat format = OutputFormat::csv;
};

// --- literal parsers ---------------------------------------------------------

inline std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<unsigned long long> parse_unsigned(std::string_view s) {
  if (s.empty()) return std::nullopt;
  unsigned long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` (and `i` / `-i` as unit imaginary).
inline std::optional<cplx> parse_complex(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.back() != 'i' && s.back() != 'j') {
    const auto re = parse_double(s);
    if (!re) return std::nullopt;
    return cplx(*re, 0.0);
  }
  s.remove_suffix(1);
  // Split at the last sign that is not part of an exponent or the leading sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](std::string_view im) -> std::optional<double> {
    if (im.empty() || im == "+") return 1.0;
    if (im == "-") return -1.0;
    return parse_double(im);
  };
  if (split == std::string_view::npos) {
    const auto im = imag_part(s);
    if (!im) return std::nullopt;
    return cplx(0.0, *im);
  }
  const auto re = parse_double(s.substr(0, split));
  const auto im = imag_part(s.substr(split));
  if (!re || !im) return std::nullopt;
  return cplx(*re, *im);
}

/// `start:stop:count` or a single value.
inline std::optional<Grid> parse_grid(std::string_view s, std::string& why) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(':', pos);
    parts.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  Grid g;
  if (parts.size() == 1) {
    const auto v = parse_double(parts[0]);
    if (!v) return why = "not a number", std::nullopt;
    g = {*v, *v, 1};
  } else if (parts.size() == 3) {
    const auto a = parse_double(parts[0]);
    const auto b = parse_double(parts[1]);
    const auto n = parse_unsigned(parts[2]);
    if (!a || !b || !n) return why = "expected start:stop:count", std::nullopt;
    g = {*a, *b, static_cast<std::size_t>(*n)};
  } else {
    return why = "expected start:stop:count or a single value", std::nullopt;
  }
  if (g.count < 1) return why = "count must be >= 1", std::nullopt;
  if (g.start < 0.0) return why = "start must be >= 0", std::nullopt;
  if (g.stop < g.start) return why = "stop must be >= start", std::nullopt;
  return g;
}

inline std::optional<std::vector<unsigned>> parse_m_list(std::string_view s) {
  std::vector<unsigned> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(',', pos);
    std::string_view item = s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const auto v = parse_unsigned(item);
    if (!v || *v > 512) return std::nullopt;
    out.push_back(static_cast<unsigned>(*v));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

// --- sources ---------------------------------------------------------------

/// Keys accepted both as `--key` flags and as config-file entries.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"scenario", "alpha", "r",   "beta-t", "beta",
                                                "t",        "phi",   "m-list", "dim-a", "dim-b",
                                                "tol",      "out",   "format"};
  return keys;
}

inline std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

/// Parses `key = value` lines. `#` starts a comment.
inline std::map<std::string, std::string> read_config_text(std::string_view text,
                                                           std::vector<std::string>& offenders) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      offenders.push_back("config line " + std::to_string(lineno) + ": expected `key = value`");
      continue;
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    trim(key);
    trim(value);
    key = normalize_key(key);
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      offenders.push_back("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      continue;
    }
    out[key] = value;
  }
  return out;
}

namespace detail {

struct RawOptions {
  std::map<std::string, std::string> values;
  std::string config_path;
};

inline std::unique_ptr<CLI::App> make_app(RawOptions& raw) {
  auto app = std::make_unique<CLI::App>("Photon-added coherent state laboratory", "pacslab");
  app->option_defaults()->take_last();
  const std::map<std::string, std::string> help = {
      {"scenario", "jc-curve | dc-overlap | dc-pm | dc-ideal-check | verify (default verify)"},
      {"alpha", "complex seed amplitude, e.g. 0.8 or 0.8+0.1i (default 0.8)"},
      {"r", "squeezing grid start:stop:count or single value"},
      {"beta-t", "dimensionless beta*t grid start:stop:count"},
      {"beta", "coupling in rad/s; multiplies the --t grid"},
      {"t", "interaction-time grid in seconds, used with --beta"},
      {"phi", "phase of lambda*t in radians (default 0)"},
      {"m-list", "comma-separated photon orders"},
      {"dim-a", "a-mode / cavity truncation (default: automatic)"},
      {"dim-b", "b-mode truncation (default: automatic)"},
      {"tol", "evolution and oracle tolerance (default 1e-10)"},
      {"out", "output file (default: stdout)"},
      {"format", "csv | json (default csv)"},
  };
  for (const auto& key : config_keys()) {
    auto* opt = app->add_option("--" + key, raw.values[key], help.at(key));
    opt->type_name("VALUE");
  }
  app->add_option("--config", raw.config_path, "flat key = value config file");
  return app;
}

inline void apply_values(const std::map<std::string, std::string>& kv, RunConfig& cfg,
                         std::vector<std::string>& offenders) {
  auto bad = [&offenders](const std::string& key, const std::string& value, const std::string& why) {
    offenders.push_back(key + " = '" + value + "': " + why);
  };
  for (const auto& [key, value] : kv) {
    if (key == "scenario") {
      if (value == "jc-curve") cfg.scenario = Scenario::jc_curve;
      else if (value == "dc-overlap") cfg.scenario = Scenario::dc_overlap;
      else if (value == "dc-pm") cfg.scenario = Scenario::dc_pm;
      else if (value == "dc-ideal-check") cfg.scenario = Scenario::dc_ideal_check;
      else if (value == "verify") cfg.scenario = Scenario::verify;
      else bad(key, value, "unknown scenario");
    } else if (key == "alpha") {
      if (auto a = parse_complex(value)) cfg.alpha = *a;
      else bad(key, value, "malformed complex number");
    } else if (key == "r" || key == "beta-t" || key == "t") {
      std::string why;
      auto g = parse_grid(value, why);
      if (!g) bad(key, value, why);
      else if (key == "r") cfg.r = g;
      else if (key == "beta-t") cfg.beta_t = g;
      else cfg.t = g;
    } else if (key == "beta" || key == "phi" || key == "tol") {
      auto v = parse_double(value);
      if (!v) bad(key, value, "malformed number");
      else if (key == "beta") {
        if (*v <= 0.0) bad(key, value, "must be > 0");
        else cfg.beta = *v;
      } else if (key == "phi") {
        cfg.phi = *v;
      } else {
        if (*v <= 0.0) bad(key, value, "must be > 0");
        else cfg.tol = *v;
      }
    } else if (key == "m-list") {
      if (auto m = parse_m_list(value)) cfg.m_list = *m;
      else bad(key, value, "expected comma-separated integers in 0..512");
    } else if (key == "dim-a" || key == "dim-b") {
      auto v = parse_unsigned(value);
      if (!v || *v == 0 || *v > 4096) bad(key, value, "expected an integer in 1..4096");
      else (key == "dim-a" ? cfg.dim_a : cfg.dim_b) = static_cast<std::size_t>(*v);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "format") {
      if (value == "csv") cfg.format = OutputFormat::csv;
      else if (value == "json") cfg.format = OutputFormat::json;
      else bad(key, value, "expected csv or json");
    }
  }
}

}  // namespace detail

inline std::string usage() {
  detail::RawOptions raw;
  return detail::make_app(raw)->help();
}

/// Resolves a RunConfig from command-line arguments (without argv[0]).
inline RunConfig parse_config(const std::vector<std::string>& args) {
  detail::RawOptions raw;
  auto app = detail::make_app(raw);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app->parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ValidationError({e.what()});
  }

  std::vector<std::string> offenders;
  std::map<std::string, std::string> merged;
  if (!raw.config_path.empty()) {
    std::ifstream in(raw.config_path, std::ios::binary);
    if (!in) {
      offenders.push_back("config: cannot read '" + raw.config_path + "'");
    } else {
      std::ostringstream text;
      text << in.rdbuf();
      merged = read_config_text(text.str(), offenders);
    }
  }
  for (const auto& key : config_keys())
    if (app->get_option("--" + key)->count() > 0) merged[key] = raw.values[key];

  RunConfig cfg;
  detail::apply_values(merged, cfg, offenders);

  if (cfg.beta.has_value() != cfg.t.has_value())
    offenders.push_back("beta and t must be given together");
  if (cfg.beta && cfg.beta_t) offenders.push_back("give either beta-t or beta with t, not both");
  if ((cfg.beta || cfg.beta_t) && cfg.scenario != Scenario::jc_curve)
    offenders.push_back("beta-t / beta / t apply only to scenario jc-curve");
  if (cfg.r && (cfg.scenario == Scenario::jc_curve || cfg.scenario == Scenario::verify))
    offenders.push_back("r applies only to dc-* scenarios");

  if (!offenders.empty()) throw ValidationError(std::move(offenders));
  return cfg;
}

// --- fingerprint -------------------------------------------------------------

inline std::string canonical_text(const RunConfig& c) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto grid = [&num](const std::optional<Grid>& g) {
    return g ? num(g->start) + ":" + num(g->stop) + ":" + std::to_string(g->count) : std::string("-");
  };
  std::string s;
  s += "scenario=" + std::string(to_string(c.scenario));
  s += ";alpha=" + num(c.alpha.real()) + "," + num(c.alpha.imag());
  s += ";beta-t=" + grid(c.beta_t);
  s += ";beta=" + (c.beta ? num(*c.beta) : std::string("-"));
  s += ";t=" + grid(c.t);
  s += ";r=" + grid(c.r);
  s += ";phi=" + num(c.phi);
  s += ";m-list=";
  for (std::size_t i = 0; i < c.m_list.size(); ++i) s += (i ? "," : "") + std::to_string(c.m_list[i]);
  s += ";dim-a=" + std::to_string(c.dim_a) + ";dim-b=" + std::to_string(c.dim_b);
  s += ";tol=" + num(c.tol);
  s += ";format=" + std::string(to_string(c.format));
  return s;
}

/// FNV-1a 64-bit hash of the canonical configuration text, hex encoded.
inline std::string fingerprint(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pacslab::cli

#endif  // PACSLAB_CLI_CONFIG_HPP
