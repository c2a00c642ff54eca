#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "nslab/error.hpp"

namespace nslab::app {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(where, "unknown key \"" + k + "\"");
}

double number(const json& j, const std::string& where, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where + "." + key, "must be finite");
  return x;
}

long integer(const json& j, const std::string& where, const char* key, long fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<long>();
}

std::string text(const json& j, const std::string& where, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& j, const std::string& where, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) fail(where + "." + key, "expected true or false");
  return v.get<bool>();
}

template <class Parse>
auto parse_name(const std::string& where, const std::string& name, Parse&& parse) {
  try {
    return parse(name);
  } catch (const nslab::Error&) {
    fail(where, "unknown kind \"" + name + "\"");
  }
}

InitialSpec initial_from_json(const json& j, const std::string& where) {
  only_keys(j, where, {"kind", "amplitude", "wavenumber", "seed", "band", "beta"});
  InitialSpec s;
  s.kind = parse_name(where + ".kind", text(j, where, "kind", "single_mode"), parse_initial_kind);
  s.amplitude = number(j, where, "amplitude", 1.0);
  s.wavenumber = static_cast<int>(integer(j, where, "wavenumber", 1));
  const long seed = integer(j, where, "seed", 0);
  if (seed < 0) fail(where + ".seed", "must be nonnegative");
  s.seed = static_cast<std::uint64_t>(seed);
  s.band = static_cast<int>(integer(j, where, "band", -1));
  s.beta = number(j, where, "beta", 2.0);
  if (s.wavenumber < 1) fail(where + ".wavenumber", "must be >= 1");
  if (s.kind == InitialKind::decaying_spectrum && !(s.beta > 1.5))
    fail(where + ".beta", "must exceed 3/2");
  return s;
}

json initial_to_json(const InitialSpec& s) {
  return {{"kind", to_string(s.kind)}, {"amplitude", s.amplitude}, {"wavenumber", s.wavenumber},
          {"seed", s.seed},            {"band", s.band},           {"beta", s.beta}};
}

ForcingTerm forcing_from_json(const json& j, const std::string& where) {
  only_keys(j, where, {"shape", "amplitude", "wavenumber", "profile", "omega", "gamma"});
  ForcingTerm t;
  t.shape = parse_name(where + ".shape", text(j, where, "shape", "single_mode"), parse_forcing_shape);
  t.amplitude = number(j, where, "amplitude", 1.0);
  t.wavenumber = static_cast<int>(integer(j, where, "wavenumber", 1));
  t.profile = parse_name(where + ".profile", text(j, where, "profile", "steady"), parse_time_profile);
  t.omega = number(j, where, "omega", 0.0);
  t.gamma = number(j, where, "gamma", 0.0);
  if (t.wavenumber < 1) fail(where + ".wavenumber", "must be >= 1");
  if (t.profile == TimeProfile::decaying && !(t.gamma > 0.0)) fail(where + ".gamma", "must be > 0");
  return t;
}

json forcing_to_json(const ForcingTerm& t) {
  return {{"shape", to_string(t.shape)},     {"amplitude", t.amplitude}, {"wavenumber", t.wavenumber},
          {"profile", to_string(t.profile)}, {"omega", t.omega},         {"gamma", t.gamma}};
}

// Monitor parameter table.
struct Param {
  const char* key;
  enum { real, whole, real_list } type;
  json fallback;
  double lo;
  bool lo_open;
  double hi;
  bool hi_open;
};

constexpr double inf = std::numeric_limits<double>::infinity();

struct MonitorSpec {
  const char* name;
  std::vector<Param> params;
};

const std::vector<MonitorSpec>& monitor_table() {
  static const std::vector<MonitorSpec> table = {
      {"energy_identity", {{"tolerance", Param::real, 1e-6, 0, true, 1, true}}},
      {"energy_estimate", {}},
      {"linearized_bound", {}},
      {"lps", {{"r", Param::real_list, json::array({4.0, 6.0}), 3, true, inf, false}}},
      {"l2r",
       {{"r", Param::real, 2.0, 1.5, true, 8, false}, {"tolerance", Param::real, 1e-4, 0, true, 1, true}}},
      {"gronwall",
       {{"j", Param::whole, 0, 0, false, 3, false},
        {"r", Param::real, 4.0, 3, true, inf, false},
        {"c", Param::real, 1.0, 0, false, inf, false}}},
      {"lions", {{"tolerance", Param::real, 1e-6, 0, true, 1, true}}},
      {"infinite_horizon", {{"negligible_level", Param::real, 1e-2, 0, true, 1, true}}},
      {"exact_solution", {{"tolerance", Param::real, 1e-8, 0, true, 1, true}}},
      {"galerkin_expm", {{"tolerance", Param::real, 1e-6, 0, true, 1, true}}},
  };
  return table;
}

std::string range_text(const Param& p) {
  std::ostringstream os;
  os << p.key;
  if (p.lo > -inf) os << (p.lo_open ? " > " : " >= ") << p.lo;
  if (p.hi < inf) os << (p.lo > -inf ? " and " : " ") << (p.hi_open ? "< " : "<= ") << p.hi;
  return os.str();
}

void check_range(const Param& p, double x, const std::string& where, const std::string& monitor) {
  const bool ok = (p.lo_open ? x > p.lo : x >= p.lo) && (p.hi_open ? x < p.hi : x <= p.hi);
  if (!ok) {
    std::ostringstream os;
    os << "the " << monitor << " monitor requires " << range_text(p) << " (got " << x << ")";
    fail(where, os.str());
  }
}

MonitorConfig monitor_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return monitor_from_json(json{{"name", j}}, where);
  if (!j.is_object()) fail(where, "expected a monitor name or object");
  const std::string name = text(j, where, "name", "");
  const auto& table = monitor_table();
  const auto it = std::find_if(table.begin(), table.end(), [&](const MonitorSpec& s) { return name == s.name; });
  if (it == table.end()) fail(where + ".name", "unknown monitor \"" + name + "\"");

  MonitorConfig m;
  m.name = name;
  json given = j.contains("params") ? j.at("params") : json::object();
  for (const auto& [k, v] : j.items())
    if (k != "name" && k != "params") fail(where, "unknown key \"" + k + "\"");
  if (!given.is_object()) fail(where + ".params", "expected an object");
  for (const auto& [k, v] : given.items()) {
    const bool known = std::any_of(it->params.begin(), it->params.end(),
                                   [&](const Param& p) { return k == p.key; });
    if (!known) fail(where + ".params", "unknown parameter \"" + k + "\" for monitor " + name);
  }
  for (const auto& p : it->params) {
    const std::string at = where + ".params." + p.key;
    const json v = given.contains(p.key) ? given.at(p.key) : p.fallback;
    switch (p.type) {
      case Param::real:
        if (!v.is_number()) fail(at, "expected a number");
        check_range(p, v.get<double>(), at, name);
        m.params[p.key] = v.get<double>();
        break;
      case Param::whole:
        if (!v.is_number_integer()) fail(at, "expected an integer");
        check_range(p, static_cast<double>(v.get<long>()), at, name);
        m.params[p.key] = v.get<long>();
        break;
      case Param::real_list: {
        if (!v.is_array() || v.empty()) fail(at, "expected a non-empty list of numbers");
        json out = json::array();
        for (const auto& x : v) {
          if (!x.is_number()) fail(at, "expected a non-empty list of numbers");
          check_range(p, x.get<double>(), at, name);
          out.push_back(x.get<double>());
        }
        m.params[p.key] = out;
        break;
      }
    }
  }
  return m;
}

}  // namespace

Equation parse_equation(const std::string& name) {
  if (name == "stokes") return Equation::stokes;
  if (name == "linearized") return Equation::linearized;
  if (name == "navier_stokes") return Equation::navier_stokes;
  throw ConfigError("physics.equation: unknown equation \"" + name + "\"");
}

std::string to_string(Equation eq) {
  switch (eq) {
    case Equation::stokes: return "stokes";
    case Equation::linearized: return "linearized";
    case Equation::navier_stokes: return "navier_stokes";
  }
  return "?";
}

const std::vector<std::string>& monitor_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : monitor_table()) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

RunConfig config_from_json(const json& j) {
  only_keys(j, "config",
            {"schema", "grid", "physics", "initial", "forcing", "advecting", "galerkin", "scheme",
             "monitors", "output"});
  const std::string schema = text(j, "config", "schema", "");
  if (schema != kConfigSchema) fail("config.schema", std::string("expected \"") + kConfigSchema + "\"");

  RunConfig c;
  const json empty = json::object();

  const json& g = j.contains("grid") ? j.at("grid") : empty;
  only_keys(g, "grid", {"n", "box_length", "dealias"});
  c.grid.n = static_cast<int>(integer(g, "grid", "n", c.grid.n));
  c.grid.box_length = number(g, "grid", "box_length", c.grid.box_length);
  c.grid.dealias = number(g, "grid", "dealias", c.grid.dealias);
  try {
    (void)make_grid(c);
  } catch (const nslab::Error& e) {
    fail("grid", e.what());
  }

  const json& p = j.contains("physics") ? j.at("physics") : empty;
  only_keys(p, "physics", {"equation", "mu", "T"});
  c.physics.equation = parse_equation(text(p, "physics", "equation", "navier_stokes"));
  c.physics.mu = number(p, "physics", "mu", c.physics.mu);
  c.physics.T = number(p, "physics", "T", c.physics.T);
  if (!(c.physics.mu > 0)) fail("physics.mu", "must be > 0");
  if (!(c.physics.T > 0)) fail("physics.T", "must be > 0");

  c.initial = initial_from_json(j.contains("initial") ? j.at("initial") : empty, "initial");

  if (j.contains("forcing")) {
    const json& f = j.at("forcing");
    only_keys(f, "forcing", {"terms"});
    if (f.contains("terms")) {
      if (!f.at("terms").is_array()) fail("forcing.terms", "expected a list");
      int i = 0;
      for (const auto& t : f.at("terms"))
        c.forcing.push_back(forcing_from_json(t, "forcing.terms[" + std::to_string(i++) + "]"));
    }
  }

  if (j.contains("advecting") && !j.at("advecting").is_null()) {
    if (c.physics.equation != Equation::linearized)
      fail("advecting", "only the linearized equation has an advecting field");
    c.advecting = initial_from_json(j.at("advecting"), "advecting");
  }

  if (j.contains("galerkin")) {
    only_keys(j.at("galerkin"), "galerkin", {"modes"});
    c.galerkin_modes = static_cast<int>(integer(j.at("galerkin"), "galerkin", "modes", 0));
    if (c.galerkin_modes < 0) fail("galerkin.modes", "must be >= 0");
  }

  const json& s = j.contains("scheme") ? j.at("scheme") : empty;
  only_keys(s, "scheme", {"name", "dt", "snapshot_every", "store_pressure", "cfl_limit"});
  c.scheme.scheme = parse_name("scheme.name", text(s, "scheme", "name", "if_rk4"), parse_scheme);
  c.scheme.dt = number(s, "scheme", "dt", c.scheme.dt);
  c.scheme.snapshot_every = static_cast<int>(integer(s, "scheme", "snapshot_every", 1));
  c.scheme.store_pressure = boolean(s, "scheme", "store_pressure", false);
  c.scheme.cfl_limit = number(s, "scheme", "cfl_limit", c.scheme.cfl_limit);
  if (!(c.scheme.dt > 0) || c.scheme.dt > c.physics.T) fail("scheme.dt", "must lie in (0, T]");
  if (c.scheme.snapshot_every < 1) fail("scheme.snapshot_every", "must be >= 1");
  if (!(c.scheme.cfl_limit > 0)) fail("scheme.cfl_limit", "must be > 0");

  if (j.contains("monitors")) {
    if (!j.at("monitors").is_array()) fail("monitors", "expected a list");
    int i = 0;
    std::set<std::string> seen;
    for (const auto& m : j.at("monitors")) {
      auto mc = monitor_from_json(m, "monitors[" + std::to_string(i++) + "]");
      if (!seen.insert(mc.name).second) fail("monitors", "monitor \"" + mc.name + "\" listed twice");
      c.monitors.push_back(std::move(mc));
    }
  }
  for (const auto& m : c.monitors) {
    if (m.name == "linearized_bound" && c.physics.equation != Equation::linearized)
      fail("monitors", "linearized_bound needs physics.equation = linearized");
    if (m.name == "galerkin_expm" && (c.galerkin_modes == 0 || c.physics.equation == Equation::navier_stokes))
      fail("monitors", "galerkin_expm needs galerkin.modes > 0 and a linear equation");
    if (m.name == "energy_identity" && c.advecting)
      fail("monitors", "energy_identity does not hold with an advecting field: (u.grad w, u) does not vanish");
    if (m.name == "l2r" && c.physics.equation != Equation::navier_stokes)
      fail("monitors", "l2r needs physics.equation = navier_stokes");
    if (m.name == "exact_solution" && c.initial.kind != InitialKind::single_mode)
      fail("monitors", "exact_solution needs a single_mode initial velocity");
  }

  const json& o = j.contains("output") ? j.at("output") : empty;
  only_keys(o, "output", {"directory", "formats", "snapshots", "checkpoint_interval"});
  c.output.directory = text(o, "output", "directory", c.output.directory);
  if (o.contains("formats")) {
    const auto& f = o.at("formats");
    if (!f.is_array()) fail("output.formats", "expected a list");
    c.output.json = c.output.csv = false;
    for (const auto& x : f) {
      if (x == "json") c.output.json = true;
      else if (x == "csv") c.output.csv = true;
      else fail("output.formats", "formats are \"json\" and \"csv\"");
    }
  }
  const std::string snaps = text(o, "output", "snapshots", "final");
  if (snaps == "all") c.output.snapshots = SnapshotPolicy::all;
  else if (snaps == "final") c.output.snapshots = SnapshotPolicy::final;
  else if (snaps == "none") c.output.snapshots = SnapshotPolicy::none;
  else fail("output.snapshots", "expected \"all\", \"final\" or \"none\"");
  c.output.checkpoint_interval = number(o, "output", "checkpoint_interval", 0.0);
  if (c.output.checkpoint_interval < 0) fail("output.checkpoint_interval", "must be >= 0");
  if (c.output.checkpoint_interval > 0 && c.output.snapshots != SnapshotPolicy::all)
    fail("output.checkpoint_interval", "checkpointing needs output.snapshots = \"all\"");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["schema"] = kConfigSchema;
  j["grid"] = {{"n", c.grid.n}, {"box_length", c.grid.box_length}, {"dealias", c.grid.dealias}};
  j["physics"] = {{"equation", to_string(c.physics.equation)}, {"mu", c.physics.mu}, {"T", c.physics.T}};
  j["initial"] = initial_to_json(c.initial);
  json terms = json::array();
  for (const auto& t : c.forcing) terms.push_back(forcing_to_json(t));
  j["forcing"] = {{"terms", terms}};
  j["advecting"] = c.advecting ? initial_to_json(*c.advecting) : json(nullptr);
  j["galerkin"] = {{"modes", c.galerkin_modes}};
  j["scheme"] = {{"name", to_string(c.scheme.scheme)},
                 {"dt", c.scheme.dt},
                 {"snapshot_every", c.scheme.snapshot_every},
                 {"store_pressure", c.scheme.store_pressure},
                 {"cfl_limit", c.scheme.cfl_limit}};
  json mons = json::array();
  for (const auto& m : c.monitors) mons.push_back({{"name", m.name}, {"params", m.params}});
  j["monitors"] = mons;
  json formats = json::array();
  if (c.output.json) formats.push_back("json");
  if (c.output.csv) formats.push_back("csv");
  const char* snaps = c.output.snapshots == SnapshotPolicy::all     ? "all"
                      : c.output.snapshots == SnapshotPolicy::final ? "final"
                                                                    : "none";
  j["output"] = {{"directory", c.output.directory},
                 {"formats", formats},
                 {"snapshots", snaps},
                 {"checkpoint_interval", c.output.checkpoint_interval}};
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

GridSpec make_grid(const RunConfig& cfg) {
  return GridSpec(cfg.grid.n, cfg.grid.box_length, cfg.grid.dealias);
}

}  // namespace nslab::app
