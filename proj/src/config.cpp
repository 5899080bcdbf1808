// Dirac laboratory - run configuration

#include "dirac/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace dirac {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw std::invalid_argument("expected a real number, got '" + v + "'");
  if (!std::isfinite(x)) throw std::invalid_argument("value must be finite");
  return x;
}

long long to_int(const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);  // shortest round-trip form
  return std::string(buf, r.ptr);
}

struct Key {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

// Keys in serialisation order.
std::vector<std::pair<std::string, Key>> key_table(RunConfig& c) {
  auto real = [](double& x) {
    return Key{[&x](const std::string& v) { x = to_double(v); }, [&x] { return fmt(x); }};
  };
  auto integer = [](int& x) {
    return Key{[&x](const std::string& v) {
                 const long long n = to_int(v);
                 if (n < -1000000000LL || n > 1000000000LL)
                   throw std::invalid_argument("integer out of range");
                 x = static_cast<int>(n);
               },
               [&x] { return std::to_string(x); }};
  };
  auto word = [](std::string& x, std::initializer_list<const char*> allowed) {
    std::vector<std::string> keep(allowed.begin(), allowed.end());
    return Key{[&x, keep](const std::string& v) {
                 for (const auto& a : keep)
                   if (v == a) {
                     x = v;
                     return;
                   }
                 std::string list;
                 for (const auto& a : keep) list += (list.empty() ? "" : ", ") + a;
                 throw std::invalid_argument("'" + v + "' is not one of {" + list + "}");
               },
               [&x] { return x; }};
  };
  std::vector<std::pair<std::string, Key>> t;
  t.emplace_back("metric.kind", word(c.metric.kind, {"kerr_ef", "ef_schwarzschild",
                                                     "ef_schwarzschild3", "flat"}));
  t.emplace_back("metric.M", real(c.metric.M));
  t.emplace_back("metric.a", real(c.metric.a));
  t.emplace_back("metric.b", Key{[&c](const std::string& v) {
                                   if (v == "auto") {
                                     c.metric.b_auto = true;
                                     c.metric.b = 0.0;
                                   } else {
                                     c.metric.b_auto = false;
                                     c.metric.b = to_double(v);
                                   }
                                 },
                                 [&c] { return c.metric.b_auto ? "auto" : fmt(c.metric.b); }});
  t.emplace_back("metric.r0", real(c.metric.r0));
  t.emplace_back("grid.Nr", integer(c.grid.Nr));
  t.emplace_back("grid.Ntheta", integer(c.grid.Ntheta));
  t.emplace_back("grid.r_outer", real(c.grid.r_outer));
  t.emplace_back("grid.k", integer(c.grid.k));
  t.emplace_back("operator.m", real(c.op.m));
  t.emplace_back("operator.potential", word(c.op.potential, {"none", "scalar", "broken"}));
  t.emplace_back("operator.v0", real(c.op.v0));
  t.emplace_back("operator.stencil_order", integer(c.op.stencil_order));
  t.emplace_back("spectral.r_mid", real(c.spectral.r_mid));
  t.emplace_back("spectral.p_max", integer(c.spectral.p_max));
  t.emplace_back("spectral.n_eigs", integer(c.spectral.n_eigs));
  t.emplace_back("evolution.T_final", real(c.evolution.T_final));
  t.emplace_back("evolution.dt", real(c.evolution.dt));
  t.emplace_back("evolution.scheme",
                 word(c.evolution.scheme, {"crank_nicolson", "rk4", "exponential"}));
  t.emplace_back("evolution.cfl", real(c.evolution.cfl));
  t.emplace_back("evolution.window_fraction", real(c.evolution.window_fraction));
  t.emplace_back("evolution.support_threshold", real(c.evolution.support_threshold));
  t.emplace_back("evolution.window_threshold", real(c.evolution.window_threshold));
  t.emplace_back("evolution.mode", word(c.evolution.mode, {"split", "reference", "both"}));
  t.emplace_back("output.directory",
                 Key{[&c](const std::string& v) {
                       if (v.empty()) throw std::invalid_argument("directory must not be empty");
                       c.output.directory = v;
                     },
                     [&c] { return c.output.directory; }});
  t.emplace_back("output.snapshot_every", integer(c.output.snapshot_every));
  t.emplace_back("tolerances.hermiticity", real(c.tolerances.hermiticity));
  t.emplace_back("tolerances.orthonormality", real(c.tolerances.orthonormality));
  t.emplace_back("tolerances.boundary", real(c.tolerances.boundary));
  t.emplace_back("tolerances.norm", real(c.tolerances.norm));
  t.emplace_back("seed", Key{[&c](const std::string& v) {
                               const long long n = to_int(v);
                               if (n < 0) throw std::invalid_argument("seed must be non-negative");
                               c.seed = static_cast<std::uint64_t>(n);
                             },
                             [&c] { return std::to_string(c.seed); }});
  return t;
}

// Range checks; returns the offending key and message, or an empty key.
std::pair<std::string, std::string> range_problem(const RunConfig& c) {
  const bool kerr = c.metric.kind == "kerr_ef" || c.metric.kind == "ef_schwarzschild";
  if (c.metric.M <= 0.0) return {"metric.M", "M must be positive"};
  if (c.metric.kind == "kerr_ef" && std::abs(c.metric.a) >= c.metric.M)
    return {"metric.a", "|a| must be smaller than M"};
  if (c.metric.r0 <= 0.0) return {"metric.r0", "r0 must be positive"};
  if (c.grid.r_outer <= c.metric.r0) return {"grid.r_outer", "r_outer must exceed metric.r0"};
  if (c.grid.Nr < 4) return {"grid.Nr", "at least 4 radial intervals are needed"};
  if (kerr && c.grid.Ntheta < 2) return {"grid.Ntheta", "at least 2 polar nodes are needed"};
  if (c.op.stencil_order != 2 && c.op.stencil_order != 4)
    return {"operator.stencil_order", "stencil order must be 2 or 4"};
  if (c.op.stencil_order == 4 && c.grid.Nr < 8)
    return {"grid.Nr", "the fourth-order closure needs at least 8 intervals"};
  if (c.op.m < 0.0) return {"operator.m", "mass must be non-negative"};
  if (c.spectral.r_mid != 0.0 &&
      (c.spectral.r_mid <= c.metric.r0 ||
       2.0 * (c.spectral.r_mid - c.metric.r0) > c.grid.r_outer - c.metric.r0 + 1e-12))
    return {"spectral.r_mid", "r_mid must lie in (r0, (r0 + r_outer) / 2]"};
  if (c.spectral.p_max < 0) return {"spectral.p_max", "p_max must be non-negative"};
  if (c.spectral.n_eigs < 1) return {"spectral.n_eigs", "n_eigs must be positive"};
  if (c.evolution.dt <= 0.0) return {"evolution.dt", "dt must be positive"};
  if (c.evolution.cfl <= 0.0) return {"evolution.cfl", "cfl must be positive"};
  if (c.evolution.window_fraction <= 0.0 || c.evolution.window_fraction > 1.0)
    return {"evolution.window_fraction", "window fraction must lie in (0, 1]"};
  if (c.evolution.support_threshold <= 0.0 || c.evolution.support_threshold >= 1.0)
    return {"evolution.support_threshold", "threshold must lie in (0, 1)"};
  if (c.evolution.window_threshold <= 0.0)
    return {"evolution.window_threshold", "threshold must be positive"};
  if (c.output.snapshot_every < 0)
    return {"output.snapshot_every", "snapshot cadence must be non-negative"};
  const double tol[] = {c.tolerances.hermiticity, c.tolerances.orthonormality,
                        c.tolerances.boundary, c.tolerances.norm};
  const char* names[] = {"tolerances.hermiticity", "tolerances.orthonormality",
                         "tolerances.boundary", "tolerances.norm"};
  for (int i = 0; i < 4; ++i)
    if (tol[i] <= 0.0) return {names[i], "tolerance must be positive"};
  return {"", ""};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  auto table = key_table(cfg);
  std::map<std::string, Key*> keys;
  for (auto& [name, key] : table) keys[name] = &key;
  std::map<std::string, int> line_of;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + what);
    };
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'section.key = value'");
    const std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys.find(name);
    if (it == keys.end()) fail("unknown key '" + name + "'");
    if (value.empty()) fail("missing value for '" + name + "'");
    if (line_of.count(name)) fail("duplicate key '" + name + "'");
    try {
      it->second->set(value);
    } catch (const std::invalid_argument& e) {
      fail(name + ": " + e.what());
    }
    line_of[name] = line_no;
  }
  const auto [key, message] = range_problem(cfg);
  if (!key.empty()) {
    const auto it = line_of.find(key);
    const std::string where =
        it == line_of.end() ? "default value" : "line " + std::to_string(it->second);
    throw ConfigError(where + ": " + key + ": " + message);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  std::ostringstream out;
  for (auto& [name, key] : key_table(copy)) out << name << " = " << key.get() << '\n';
  return out.str();
}

std::shared_ptr<const MetricClosure> config_metric(const RunConfig& cfg) {
  KerrParams p;
  p.M = cfg.metric.M;
  p.a = cfg.metric.a;
  p.r0 = cfg.metric.r0;
  p.b = cfg.metric.b;
  if (cfg.metric.b_auto) {
    if (cfg.metric.kind == "kerr_ef") {
      const double span = 2.0 / std::max(cfg.metric.r0, 1e-3);
      p.b = find_timelike_mix(p, cfg.metric.r0, {-span, span}, 64).b;
    } else {
      p.b = 0.0;
    }
  }
  return make_metric(cfg.metric.kind, p);
}

Grid config_grid(const RunConfig& cfg, const MetricClosure& closure) {
  return make_grid(closure.dimension(), cfg.metric.r0, cfg.grid.r_outer, cfg.grid.Nr,
                   cfg.grid.Ntheta, cfg.grid.k, cfg.op.stencil_order);
}

OperatorOptions config_operator(const RunConfig& cfg) {
  OperatorOptions o;
  o.m = cfg.op.m;
  o.order = cfg.op.stencil_order;
  o.potential.v0 = cfg.op.v0;
  if (cfg.op.potential == "scalar") o.potential.kind = Potential::Kind::Scalar;
  if (cfg.op.potential == "broken") o.potential.kind = Potential::Kind::Broken;
  return o;
}

EvolutionConfig config_evolution(const RunConfig& cfg) {
  EvolutionConfig e;
  e.T_final = cfg.evolution.T_final;
  e.dt = cfg.evolution.dt;
  e.scheme = parse_scheme(cfg.evolution.scheme);
  e.cfl = cfg.evolution.cfl;
  e.window_fraction = cfg.evolution.window_fraction;
  e.support_threshold = cfg.evolution.support_threshold;
  e.window_threshold = cfg.evolution.window_threshold;
  e.norm_tolerance = cfg.tolerances.norm;
  e.snapshot_every = cfg.output.snapshot_every;
  return e;
}

double config_r_max(const RunConfig& cfg) {
  const double r_mid = cfg.spectral.r_mid != 0.0
                           ? cfg.spectral.r_mid
                           : 0.5 * (cfg.metric.r0 + cfg.grid.r_outer);
  return 2.0 * (r_mid - cfg.metric.r0);
}

}  // namespace dirac
