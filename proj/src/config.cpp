#include "chsolver/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "chsolver/errors.hpp"
#include "chsolver/io.hpp"

namespace chs {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& v, std::size_t line) {
  char* end = nullptr;
  double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) throw ParseError(line, "not a number: '" + v + "'");
  return out;
}

template <typename Int>
Int parse_int(const std::string& v, std::size_t line) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError(line, "not an integer: '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, std::size_t line) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ParseError(line, "not a boolean: '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, std::size_t line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, line));
  }
  return out;
}

struct Field {
  std::function<void(SimConfig&, const std::string&, std::size_t)> set;
  std::function<std::string(const SimConfig&)> get;  // empty for write-only aliases
};

template <typename T>
Field double_field(T SimConfig::*member) {
  return {[member](SimConfig& c, const std::string& v, std::size_t l) { c.*member = parse_double(v, l); },
          [member](const SimConfig& c) { return format_double(c.*member); }};
}

template <typename T>
Field int_field(T SimConfig::*member) {
  return {[member](SimConfig& c, const std::string& v, std::size_t l) { c.*member = parse_int<T>(v, l); },
          [member](const SimConfig& c) { return std::to_string(c.*member); }};
}

Field string_field(std::string SimConfig::*member) {
  return {[member](SimConfig& c, const std::string& v, std::size_t) { c.*member = v; },
          [member](const SimConfig& c) { return c.*member; }};
}

// Ordered by section for serialization.
const std::vector<std::pair<std::string, Field>>& schema() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"scenario.name", string_field(&SimConfig::scenario)},
      {"scenario.seed", int_field(&SimConfig::seed)},
      {"grid.dim", int_field(&SimConfig::dim)},
      {"grid.N", int_field(&SimConfig::modes)},
      {"grid.L", double_field(&SimConfig::length)},
      {"grid.dealias",
       {[](SimConfig& c, const std::string& v, std::size_t l) { c.dealias = parse_bool(v, l); },
        [](const SimConfig& c) { return std::string(c.dealias ? "true" : "false"); }}},
      {"model.eps", double_field(&SimConfig::eps)},
      {"model.eps2",
       {[](SimConfig& c, const std::string& v, std::size_t l) {
          double eps2 = parse_double(v, l);
          if (!(eps2 > 0.0)) throw ValidationError("eps2 must be positive");
          c.eps = std::sqrt(eps2);
        },
        {}}},
      {"initial.kind", string_field(&SimConfig::initial)},
      {"initial.value", double_field(&SimConfig::initial_value)},
      {"initial.rand_range", string_field(&SimConfig::rand_range)},
      {"initial.kissing_grouping", string_field(&SimConfig::kissing_grouping)},
      {"initial.kissing_offset", double_field(&SimConfig::kissing_offset)},
      {"time.T", double_field(&SimConfig::horizon)},
      {"time.policy", string_field(&SimConfig::policy)},
      {"time.tau", double_field(&SimConfig::tau)},
      {"time.steps", int_field(&SimConfig::steps)},
      {"time.tau_min", double_field(&SimConfig::tau_min)},
      {"time.tau_max", double_field(&SimConfig::tau_max)},
      {"time.alpha", double_field(&SimConfig::alpha)},
      {"time.delta", double_field(&SimConfig::delta)},
      {"output.dir", string_field(&SimConfig::output_dir)},
      {"output.snapshot_times",
       {[](SimConfig& c, const std::string& v, std::size_t l) { c.snapshot_times = parse_list(v, l); },
        [](const SimConfig& c) {
          std::string out;
          for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
            if (i) out += ", ";
            out += format_double(c.snapshot_times[i]);
          }
          return out;
        }}},
      {"output.record_every", int_field(&SimConfig::record_every)},
      {"convergence.base_K", int_field(&SimConfig::base_steps)},
      {"convergence.levels", int_field(&SimConfig::levels)},
      {"convergence.reference_steps", int_field(&SimConfig::reference_steps)},
  };
  return table;
}

const Field* lookup(const std::string& key) {
  for (const auto& [name, field] : schema())
    if (name == key) return &field;
  return nullptr;
}

struct Entry {
  std::string key;
  std::string value;
  std::size_t line;
};

std::vector<Entry> tokenize(std::string_view text) {
  std::vector<Entry> out;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(line_no, "empty section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    if (section.empty()) throw ParseError(line_no, "key outside of any [section]");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    std::string full = section + "." + key;
    if (!lookup(full)) throw ParseError(line_no, "unknown key '" + key + "' in [" + section + "]");
    out.push_back({full, value, line_no});
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace

SimConfig config_defaults(ScenarioKind kind) {
  SimConfig c;
  c.scenario = to_string(kind);
  switch (kind) {
    case ScenarioKind::Convergence:
      c.eps = 0.2;
      c.horizon = 0.1;
      c.initial = "bubble";
      c.policy = "random";
      c.steps = 400;
      c.tau = 1e-4;
      c.snapshot_times = {0.0, 0.1};
      break;
    case ScenarioKind::KissingBubbles:
      c.eps = std::sqrt(0.1);
      c.horizon = 1.0;
      c.initial = "kissing";
      c.policy = "adaptive";
      c.tau_min = 1e-4;
      c.tau_max = 7e-3;
      c.alpha = 0.01;
      c.tau = 1e-4;
      c.snapshot_times = {0.0, 0.1, 0.2, 0.5, 0.8, 1.0};
      break;
    case ScenarioKind::Coarsening2d:
      c.eps = 0.3;
      c.horizon = 3.0;
      c.initial = "random";
      c.policy = "adaptive";
      c.tau_min = 1e-5;
      c.tau_max = 1e-4;
      c.alpha = 0.01;
      c.tau = 1e-5;
      c.snapshot_times = {0.0, 0.1, 0.2, 1.0, 2.0, 3.0};
      break;
    case ScenarioKind::Coarsening3d:
      c.dim = 3;
      c.modes = 48;
      c.eps = 2.0 * std::numbers::pi / 48.0;
      c.horizon = 1.8;
      c.initial = "random";
      c.policy = "adaptive";
      c.tau_min = 4e-5;
      c.tau_max = 1e-4;
      c.alpha = 1.0;
      c.tau = 4e-5;
      c.snapshot_times = {0.0, 0.2, 0.4, 0.8, 1.0, 1.8};
      break;
  }
  return c;
}

SimConfig parse_config_text(std::string_view text, std::optional<std::string> scenario_override) {
  auto entries = tokenize(text);
  std::string name = "convergence";
  for (const auto& e : entries)
    if (e.key == "scenario.name") name = e.value;
  if (scenario_override) name = *scenario_override;

  SimConfig config = config_defaults(scenario_from_string(name));
  for (const auto& e : entries) lookup(e.key)->set(config, e.value, e.line);
  config.scenario = name;
  validate(config);
  return config;
}

SimConfig parse_config(const std::filesystem::path& path,
                       std::optional<std::string> scenario_override) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(scenario_override));
}

std::string serialize_config(const SimConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [key, field] : schema()) {
    if (!field.get) continue;
    auto dot = key.find('.');
    std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + field.get(config) + "\n";
  }
  return out;
}

void validate(const SimConfig& c) {
  ScenarioKind kind = scenario_from_string(c.scenario);
  (void)kind;
  if (c.dim != 2 && c.dim != 3) throw ValidationError("dim must be 2 or 3");
  if (c.modes < 4 || c.modes % 2 != 0) throw ValidationError("N must be even and >= 4");
  if (c.length < 0.0 || !std::isfinite(c.length)) throw ValidationError("L must be positive");
  if (!(c.eps > 0.0)) throw ValidationError("eps must be positive");
  if (!(c.horizon > 0.0)) throw ValidationError("T must be positive");
  if (!(c.tau > 0.0)) throw ValidationError("tau must be positive");
  if (!(c.tau_min > 0.0)) throw ValidationError("tau_min must be positive");
  if (!(c.tau_max > 0.0)) throw ValidationError("tau_max must be positive");
  if (c.tau_min > c.tau_max) throw ValidationError("tau_min must not exceed tau_max");
  if (!(c.alpha >= 0.0)) throw ValidationError("alpha must be non-negative");
  if (!(c.delta > 0.0) || !(c.delta < r_max_root())) throw ValidationError("delta must lie in (0, r_max)");
  if (c.steps < 2) throw ValidationError("steps must be >= 2");
  if (c.record_every < 1) throw ValidationError("record_every must be >= 1");
  if (c.base_steps < 2) throw ValidationError("base_K must be >= 2");
  if (c.levels < 1) throw ValidationError("levels must be >= 1");
  for (double t : c.snapshot_times)
    if (!(t >= 0.0)) throw ValidationError("snapshot times must be non-negative");
  if (c.policy != "fixed" && c.policy != "random" && c.policy != "adaptive")
    throw ValidationError("policy must be fixed, random or adaptive");
  InitialKind ic = initial_from_string(c.initial);
  if ((ic == InitialKind::Bubble || ic == InitialKind::Kissing) && c.dim != 2)
    throw ValidationError("initial condition '" + c.initial + "' needs dim = 2");
  if (c.rand_range != "symmetric" && c.rand_range != "unit")
    throw ValidationError("rand_range must be symmetric or unit");
  if (c.kissing_grouping != "standard" && c.kissing_grouping != "verbatim")
    throw ValidationError("kissing_grouping must be standard or verbatim");
}

Scenario to_scenario(const SimConfig& c) {
  validate(c);
  Scenario s;
  s.kind = scenario_from_string(c.scenario);
  s.dim = c.dim;
  s.modes = c.modes;
  s.length = c.length;
  s.eps = c.eps;
  s.horizon = c.horizon;
  s.seed = c.seed;
  s.dealias = c.dealias;
  s.snapshot_times = c.snapshot_times;
  s.initial.kind = initial_from_string(c.initial);
  s.initial.value = c.initial_value;
  s.initial.rand_range = c.rand_range == "unit" ? RandRange::Unit : RandRange::Symmetric;
  s.initial.kissing.verbatim_grouping = c.kissing_grouping == "verbatim";
  s.initial.kissing.offset = c.kissing_offset;
  if (c.policy == "fixed") {
    s.policy = FixedStep{c.tau};
  } else if (c.policy == "random") {
    s.policy = PrescribedMesh{random_mesh(c.horizon, c.steps, c.seed)};
  } else {
    s.policy = make_adaptive(c.tau_min, c.tau_max, c.alpha, c.delta);
  }
  return s;
}

ConvergenceSetup to_convergence_setup(const SimConfig& c) {
  validate(c);
  ConvergenceSetup setup;
  setup.modes = c.modes;
  setup.eps = c.eps;
  setup.horizon = c.horizon;
  setup.base_steps = c.base_steps;
  setup.levels = c.levels;
  setup.reference_steps = c.reference_steps;
  setup.seed = c.seed;
  return setup;
}

}  // namespace chs
