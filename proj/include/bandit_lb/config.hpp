#pragma once
/// \file config.hpp
/// Experiment configuration: a sectioned key = value text format.
///
///   [experiment]
///   command = simulate            ; bounds | simulate | verify | figure1
///   horizon = 10000
///   runs = 500
///   seed = 42
///   checkpoints = log:60          ; log:N | linear:N | list:1,10,100
///   out = results/run1
///
///   [problem]
///   preset = figure1              ; or: model = <tag> followed by arm lines
///   arm = bernoulli 0.05          ; one line per arm, in arm order
///
///   [strategy]
///   id = known_mu_star
///   mu_star = 0
///
///   [bounds]
///   ids = asymptotic, collective
///   c_psi = 16
///   omega = 0, 1.5                ; per-arm continuity slopes
///
/// Arm lines: bernoulli p | gaussian mean variance | poisson mean |
/// gamma shape mean | binomial n mean | dirac x | finite M x:w x:w ...
/// Lines starting with '#' or ';' are comments. Numbers are parsed with
/// std::from_chars and printed in shortest round-trip form, so
/// parse(serialize(c)) == c.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"
#include "lower_bounds.hpp"
#include "models.hpp"
#include "strategies.hpp"

namespace bandit_lb {

enum class Command { bounds, simulate, verify, figure1 };

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::bounds: return "bounds";
    case Command::simulate: return "simulate";
    case Command::verify: return "verify";
    case Command::figure1: return "figure1";
  }
  return "?";
}

inline Command command_from_string(std::string_view s) {
  if (s == "bounds") return Command::bounds;
  if (s == "simulate") return Command::simulate;
  if (s == "verify") return Command::verify;
  if (s == "figure1") return Command::figure1;
  throw ConfigError("unknown command '" + std::string(s) + "'");
}

struct CheckpointSpec {
  enum class Kind { log, linear, list } kind = Kind::log;
  std::uint64_t count = 60;
  std::vector<std::uint64_t> list;
  bool operator==(const CheckpointSpec&) const = default;
};

/// Strictly increasing checkpoints in [1, T] that always end at T.
inline std::vector<std::uint64_t> make_grid(const CheckpointSpec& spec, std::uint64_t T) {
  if (T < 1) throw ConfigError("horizon must be >= 1");
  std::vector<std::uint64_t> g;
  auto push = [&](std::uint64_t t) {
    t = std::clamp<std::uint64_t>(t, 1, T);
    if (g.empty() || t > g.back()) g.push_back(t);
  };
  switch (spec.kind) {
    case CheckpointSpec::Kind::log: {
      if (spec.count < 1) throw ConfigError("log checkpoint count must be >= 1");
      const double lt = std::log(static_cast<double>(T));
      for (std::uint64_t i = 0; i < spec.count; ++i) {
        const double frac = spec.count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(spec.count - 1);
        push(static_cast<std::uint64_t>(std::llround(std::exp(lt * frac))));
      }
      break;
    }
    case CheckpointSpec::Kind::linear: {
      if (spec.count < 1) throw ConfigError("linear checkpoint count must be >= 1");
      for (std::uint64_t i = 1; i <= spec.count; ++i)
        push(static_cast<std::uint64_t>(std::llround(static_cast<double>(T) * i / static_cast<double>(spec.count))));
      break;
    }
    case CheckpointSpec::Kind::list: {
      if (spec.list.empty()) throw ConfigError("checkpoint list is empty");
      for (std::size_t i = 0; i < spec.list.size(); ++i) {
        const auto t = spec.list[i];
        if (t < 1 || t > T) throw ConfigError("checkpoint " + std::to_string(t) + " outside [1, horizon]");
        if (i > 0 && t <= spec.list[i - 1]) throw ConfigError("checkpoint list must be strictly increasing");
        g.push_back(t);
      }
      return g;
    }
  }
  push(T);
  return g;
}

struct ExperimentConfig {
  Command command = Command::simulate;
  std::uint64_t horizon = 1000;
  std::uint64_t runs = 100;
  std::uint64_t seed = 1;
  CheckpointSpec checkpoints;
  std::string out = "out";

  std::optional<std::string> preset;  // "figure1"
  std::optional<ModelTag> model;
  std::vector<Distribution> arms;

  StrategySpec strategy;

  std::vector<std::string> bound_ids;
  std::optional<double> c_psi;
  std::vector<double> omega;

  bool operator==(const ExperimentConfig&) const = default;

  bool has_problem() const { return preset.has_value() || !arms.empty(); }

  BanditProblem problem() const {
    if (preset) {
      if (*preset == "figure1") return figure1_problem();
      throw ConfigError("unknown preset '" + *preset + "'");
    }
    if (arms.empty()) throw ConfigError("no problem given: set preset or list arms in [problem]");
    try {
      return BanditProblem(arms, model.value_or(natural_model(arms.front())));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid problem: ") + e.what());
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

inline std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline double parse_real(std::string_view s, const std::string& what) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(what + ": '" + std::string(s) + "' is not a finite number");
  return v;
}

inline std::uint64_t parse_uint(std::string_view s, const std::string& what) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    throw ConfigError(what + ": '" + std::string(s) + "' is not an unsigned 64-bit integer");
  return v;
}

inline Distribution parse_arm(std::string_view line) {
  const auto w = words(line);
  if (w.empty()) throw ConfigError("empty arm line");
  const std::string family(w[0]);
  auto need = [&](std::size_t n) {
    if (w.size() != n + 1)
      throw ConfigError("arm '" + family + "' takes " + std::to_string(n) + " parameter(s): '" + std::string(line) + "'");
  };
  auto num = [&](std::size_t i) { return parse_real(w[i], "arm " + family); };
  if (family == "bernoulli") {
    need(1);
    return Bernoulli{num(1)};
  }
  if (family == "gaussian") {
    need(2);
    return Gaussian{num(1), num(2)};
  }
  if (family == "poisson") {
    need(1);
    return Poisson{num(1)};
  }
  if (family == "gamma") {
    need(2);
    return Gamma{num(1), num(2)};
  }
  if (family == "binomial") {
    need(2);
    const auto n = parse_uint(w[1], "binomial trials");
    if (n < 1 || n > 1000000) throw ConfigError("binomial trials must lie in [1, 1e6]");
    return Binomial{static_cast<int>(n), num(2)};
  }
  if (family == "dirac") {
    need(1);
    return Dirac{num(1)};
  }
  if (family == "finite") {
    if (w.size() < 3) throw ConfigError("arm 'finite' needs a ceiling and at least one x:w pair");
    Finite f;
    f.ceiling = num(1);
    for (std::size_t i = 2; i < w.size(); ++i) {
      const auto parts = split(w[i], ':');
      if (parts.size() != 2) throw ConfigError("finite support entry must be x:w, got '" + std::string(w[i]) + "'");
      f.points.push_back(parse_real(parts[0], "finite point"));
      f.weights.push_back(parse_real(parts[1], "finite weight"));
    }
    return f;
  }
  throw ConfigError("unknown arm family '" + family + "'");
}

inline std::string serialize_arm(const Distribution& d) {
  struct V {
    std::string operator()(const Bernoulli& b) const { return "bernoulli " + format_double(b.p); }
    std::string operator()(const Gaussian& g) const {
      return "gaussian " + format_double(g.mean) + " " + format_double(g.variance);
    }
    std::string operator()(const Poisson& p) const { return "poisson " + format_double(p.mean); }
    std::string operator()(const Gamma& g) const { return "gamma " + format_double(g.shape) + " " + format_double(g.mean); }
    std::string operator()(const Binomial& b) const {
      return "binomial " + std::to_string(b.trials) + " " + format_double(b.mean);
    }
    std::string operator()(const Dirac& d) const { return "dirac " + format_double(d.point); }
    std::string operator()(const Finite& f) const {
      std::string s = "finite " + format_double(f.ceiling);
      for (std::size_t i = 0; i < f.points.size(); ++i)
        s += " " + format_double(f.points[i]) + ":" + format_double(f.weights[i]);
      return s;
    }
  };
  return std::visit(V{}, d);
}

inline CheckpointSpec parse_checkpoints(std::string_view v) {
  const auto colon = v.find(':');
  if (colon == std::string_view::npos) throw ConfigError("checkpoints must be log:N, linear:N or list:t1,t2,...");
  const auto kind = trim(v.substr(0, colon));
  const auto rest = v.substr(colon + 1);
  CheckpointSpec c;
  if (kind == "log" || kind == "linear") {
    c.kind = kind == "log" ? CheckpointSpec::Kind::log : CheckpointSpec::Kind::linear;
    c.count = parse_uint(rest, "checkpoint count");
    if (c.count < 1) throw ConfigError("checkpoint count must be >= 1");
  } else if (kind == "list") {
    c.kind = CheckpointSpec::Kind::list;
    c.count = 0;
    for (auto t : split(rest, ',')) c.list.push_back(parse_uint(t, "checkpoint"));
  } else {
    throw ConfigError("unknown checkpoint grid '" + std::string(kind) + "'");
  }
  return c;
}

inline std::string serialize_checkpoints(const CheckpointSpec& c) {
  switch (c.kind) {
    case CheckpointSpec::Kind::log: return "log:" + format_uint(c.count);
    case CheckpointSpec::Kind::linear: return "linear:" + format_uint(c.count);
    case CheckpointSpec::Kind::list: {
      std::string s = "list:";
      for (std::size_t i = 0; i < c.list.size(); ++i) s += (i ? "," : "") + format_uint(c.list[i]);
      return s;
    }
  }
  return "";
}

}  // namespace detail

/// Checks the cross-field invariants: T >= 1, runs >= 1, ids resolve, problem is valid.
inline void validate_config(const ExperimentConfig& c) {
  if (c.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (c.runs < 1) throw ConfigError("runs must be >= 1");
  for (const auto& id : c.bound_ids)
    if (std::find(all_bound_ids().begin(), all_bound_ids().end(), id) == all_bound_ids().end())
      throw ConfigError("unknown bound id '" + id + "'");
  if (c.c_psi && !(*c.c_psi > 0.0)) throw ConfigError("c_psi must be > 0");
  for (double w : c.omega)
    if (!(w >= 0.0)) throw ConfigError("omega entries must be >= 0");
  if (c.preset && !c.arms.empty()) throw ConfigError("[problem] takes either a preset or arm lines, not both");
  if (c.has_problem()) {
    const BanditProblem nu = c.problem();
    make_strategy(c.strategy, nu.size());
    if (!c.omega.empty() && c.omega.size() != nu.size())
      throw ConfigError("omega needs one entry per arm (" + std::to_string(nu.size()) + ")");
  } else if (c.command == Command::bounds || c.command == Command::simulate) {
    throw ConfigError("command '" + std::string(to_string(c.command)) + "' needs a [problem] section");
  } else {
    make_strategy(c.strategy, 2);
  }
  make_grid(c.checkpoints, c.horizon);
}

inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "experiment" && section != "problem" && section != "strategy" && section != "bounds")
        throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    auto value = detail::trim(line.substr(eq + 1));
    if (const auto hash = value.find(" ;"); hash != std::string_view::npos) value = detail::trim(value.substr(0, hash));
    if (section.empty()) throw ConfigError(where + "key outside of any section");
    try {
      if (section == "experiment") {
        if (key == "command") c.command = command_from_string(value);
        else if (key == "horizon") c.horizon = detail::parse_uint(value, "horizon");
        else if (key == "runs") c.runs = detail::parse_uint(value, "runs");
        else if (key == "seed") c.seed = detail::parse_uint(value, "seed");
        else if (key == "checkpoints") c.checkpoints = detail::parse_checkpoints(value);
        else if (key == "out") c.out = std::string(value);
        else throw ConfigError("unknown key '" + key + "' in [experiment]");
      } else if (section == "problem") {
        if (key == "preset") {
          if (value != "figure1") throw ConfigError("unknown preset '" + std::string(value) + "'");
          c.preset = std::string(value);
        } else if (key == "model") {
          c.model = model_from_string(value);
        } else if (key == "arm") {
          c.arms.push_back(detail::parse_arm(value));
        } else {
          throw ConfigError("unknown key '" + key + "' in [problem]");
        }
      } else if (section == "strategy") {
        if (key == "id") c.strategy.id = std::string(value);
        else {
          c.strategy.params[key] = detail::parse_real(value, "strategy parameter " + key);
        }
      } else if (section == "bounds") {
        if (key == "ids") {
          c.bound_ids.clear();
          for (auto id : detail::split(value, ','))
            if (!id.empty()) c.bound_ids.emplace_back(id);
        } else if (key == "c_psi") {
          c.c_psi = detail::parse_real(value, "c_psi");
        } else if (key == "omega") {
          c.omega.clear();
          for (auto w : detail::split(value, ',')) c.omega.push_back(detail::parse_real(w, "omega"));
        } else {
          throw ConfigError("unknown key '" + key + "' in [bounds]");
        }
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ExperimentConfig& c) {
  std::string s;
  s += "[experiment]\n";
  s += "command = " + std::string(to_string(c.command)) + "\n";
  s += "horizon = " + format_uint(c.horizon) + "\n";
  s += "runs = " + format_uint(c.runs) + "\n";
  s += "seed = " + format_uint(c.seed) + "\n";
  s += "checkpoints = " + detail::serialize_checkpoints(c.checkpoints) + "\n";
  s += "out = " + c.out + "\n";
  s += "\n[problem]\n";
  if (c.preset) s += "preset = " + *c.preset + "\n";
  if (c.model) s += "model = " + std::string(to_string(*c.model)) + "\n";
  for (const auto& a : c.arms) s += "arm = " + detail::serialize_arm(a) + "\n";
  s += "\n[strategy]\n";
  s += "id = " + c.strategy.id + "\n";
  for (const auto& [k, v] : c.strategy.params) s += k + " = " + format_double(v) + "\n";
  s += "\n[bounds]\n";
  if (!c.bound_ids.empty()) {
    s += "ids = ";
    for (std::size_t i = 0; i < c.bound_ids.size(); ++i) s += (i ? ", " : "") + c.bound_ids[i];
    s += "\n";
  }
  if (c.c_psi) s += "c_psi = " + format_double(*c.c_psi) + "\n";
  if (!c.omega.empty()) {
    s += "omega = ";
    for (std::size_t i = 0; i < c.omega.size(); ++i) s += (i ? ", " : "") + format_double(c.omega[i]);
    s += "\n";
  }
  return s;
}

}  // namespace bandit_lb
