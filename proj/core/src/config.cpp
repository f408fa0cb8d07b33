#include "nsf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line + 1; }

std::string scalar(const YAML::Node& node, std::string_view key) {
  if (!node.IsScalar()) throw ConfigError(line_of(node), "'" + std::string(key) + "' expects a single value");
  return node.Scalar();
}

double to_double(const YAML::Node& node, std::string_view key) {
  const std::string v = scalar(node, key);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(line_of(node), "'" + std::string(key) + "' expects a finite number, got '" + v + "'");
  return out;
}

long long to_integer(const YAML::Node& node, std::string_view key) {
  const std::string v = scalar(node, key);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(line_of(node), "'" + std::string(key) + "' expects an integer, got '" + v + "'");
  return out;
}

int to_int(const YAML::Node& node, std::string_view key) {
  const long long x = to_integer(node, key);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(line_of(node), "'" + std::string(key) + "' is out of range");
  return static_cast<int>(x);
}

std::vector<double> to_list(const YAML::Node& node, std::string_view key) {
  if (node.IsScalar()) return {to_double(node, key)};
  if (!node.IsSequence()) throw ConfigError(line_of(node), "'" + std::string(key) + "' expects a list of numbers");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(to_double(item, key));
  return out;
}

bool to_shape(const YAML::Node& node, std::string_view key) {
  const std::string v = scalar(node, key);
  if (v == "sin") return true;
  if (v == "cos") return false;
  throw ConfigError(line_of(node), "'" + std::string(key) + "' must be sin or cos, got '" + v + "'");
}

using Setter = std::function<void(SweepConfig&, const YAML::Node&)>;
using SetterTable = std::map<std::string, Setter, std::less<>>;

void add_mode_keys(SetterTable& t, const std::string& prefix, ModeTerm SweepConfig::*term) {
  t[prefix + "_base"] = [term, k = prefix + "_base"](SweepConfig& c, const YAML::Node& v) {
    (c.*term).base = to_double(v, k);
  };
  t[prefix + "_amp"] = [term, k = prefix + "_amp"](SweepConfig& c, const YAML::Node& v) {
    (c.*term).amp = to_double(v, k);
  };
  t[prefix + "_mode"] = [term, k = prefix + "_mode"](SweepConfig& c, const YAML::Node& v) {
    (c.*term).mode = to_int(v, k);
  };
  t[prefix + "_shape"] = [term, k = prefix + "_shape"](SweepConfig& c, const YAML::Node& v) {
    (c.*term).sine = to_shape(v, k);
  };
}

std::map<std::string, SetterTable, std::less<>> build_tables() {
  std::map<std::string, SetterTable, std::less<>> tables;

  auto& thermo = tables["thermo"];
  const std::pair<const char*, double ThermoCoefficients::*> coeffs[] = {
      {"a", &ThermoCoefficients::a},         {"mu0", &ThermoCoefficients::mu0},
      {"mu1", &ThermoCoefficients::mu1},     {"eta0", &ThermoCoefficients::eta0},
      {"eta1", &ThermoCoefficients::eta1},   {"kappa0", &ThermoCoefficients::kappa0},
      {"kappa2", &ThermoCoefficients::kappa2}, {"kappa3", &ThermoCoefficients::kappa3},
      {"S0", &ThermoCoefficients::S0}};
  for (const auto& [name, member] : coeffs) {
    thermo[name] = [member, k = std::string(name)](SweepConfig& c, const YAML::Node& v) {
      c.thermo.*member = to_double(v, k);
    };
  }
  thermo["P_closure"] = [](SweepConfig& c, const YAML::Node& v) {
    const std::string name = scalar(v, "P_closure");
    if (name != "power_sum" && name != "saturating")
      throw ConfigError(line_of(v), "'P_closure' must be power_sum or saturating, got '" + name + "'");
    c.closure = name;
  };
  thermo["P_linear"] = [](SweepConfig& c, const YAML::Node& v) { c.p_linear = to_double(v, "P_linear"); };
  thermo["P_inf"] = [](SweepConfig& c, const YAML::Node& v) { c.p_inf = to_double(v, "P_inf"); };

  auto& profile = tables["profile"];
  add_mode_keys(profile, "rho", &SweepConfig::rho);
  add_mode_keys(profile, "u", &SweepConfig::u);
  add_mode_keys(profile, "theta", &SweepConfig::theta);

  auto& pert = tables["perturbation"];
  pert["delta"] = [](SweepConfig& c, const YAML::Node& v) { c.perturbation.delta = to_double(v, "delta"); };
  pert["alpha"] = [](SweepConfig& c, const YAML::Node& v) { c.perturbation.alpha = to_double(v, "alpha"); };
  pert["mode1"] = [](SweepConfig& c, const YAML::Node& v) { c.perturbation.mode1 = to_int(v, "mode1"); };
  pert["mode2"] = [](SweepConfig& c, const YAML::Node& v) { c.perturbation.mode2 = to_int(v, "mode2"); };

  auto& sweep = tables["sweep"];
  sweep["epsilons"] = [](SweepConfig& c, const YAML::Node& v) { c.epsilons = to_list(v, "epsilons"); };
  sweep["r"] = [](SweepConfig& c, const YAML::Node& v) { c.r = to_list(v, "r"); };
  sweep["n1"] = [](SweepConfig& c, const YAML::Node& v) { c.grid.n1 = to_int(v, "n1"); };
  sweep["n2"] = [](SweepConfig& c, const YAML::Node& v) { c.grid.n2 = to_int(v, "n2"); };
  sweep["n3"] = [](SweepConfig& c, const YAML::Node& v) { c.grid.n3 = to_int(v, "n3"); };
  sweep["T_final"] = [](SweepConfig& c, const YAML::Node& v) { c.t_final = to_double(v, "T_final"); };
  sweep["outputs"] = [](SweepConfig& c, const YAML::Node& v) { c.outputs = to_int(v, "outputs"); };
  sweep["cfl"] = [](SweepConfig& c, const YAML::Node& v) { c.cfl = to_double(v, "cfl"); };
  sweep["seed"] = [](SweepConfig& c, const YAML::Node& v) {
    const long long s = to_integer(v, "seed");
    if (s < 0) throw ConfigError(line_of(v), "'seed' must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  };
  sweep["cross_section"] = [](SweepConfig& c, const YAML::Node& v) {
    const auto q = to_list(v, "cross_section");
    if (q.size() != 4) throw ConfigError(line_of(v), "'cross_section' expects four numbers [a, b, c, d]");
    c.cross_section = CrossSection{q[0], q[1], q[2], q[3]};
  };

  auto& output = tables["output"];
  output["dir"] = [](SweepConfig& c, const YAML::Node& v) { c.out_dir = scalar(v, "dir"); };
  output["snapshot_stride"] = [](SweepConfig& c, const YAML::Node& v) {
    c.snapshot_stride = to_int(v, "snapshot_stride");
  };
  output["snapshot_format"] = [](SweepConfig& c, const YAML::Node& v) {
    const std::string f = scalar(v, "snapshot_format");
    if (f == "binary") c.snapshot_format = SnapshotFormat::kBinary;
    else if (f == "csv") c.snapshot_format = SnapshotFormat::kCsv;
    else throw ConfigError(line_of(v), "'snapshot_format' must be binary or csv, got '" + f + "'");
  };
  return tables;
}

const auto& tables() {
  static const auto t = build_tables();
  return t;
}

struct LineOf {
  std::map<std::string, int> lines;
  int operator()(const std::string& qualified) const {
    const auto it = lines.find(qualified);
    return it == lines.end() ? 0 : it->second;
  }
};

void validate(const SweepConfig& c, const LineOf& line) {
  const auto require = [&](bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(line(key), what);
  };

  const std::pair<const char*, double> positive[] = {
      {"thermo.a", c.thermo.a},         {"thermo.mu0", c.thermo.mu0},       {"thermo.mu1", c.thermo.mu1},
      {"thermo.kappa0", c.thermo.kappa0}, {"thermo.kappa2", c.thermo.kappa2}, {"thermo.kappa3", c.thermo.kappa3},
      {"thermo.P_linear", c.p_linear}};
  for (const auto& [key, value] : positive)
    require(value > 0.0, key, std::string(key).substr(7) + " must be positive");
  require(c.thermo.eta0 >= 0.0, "thermo.eta0", "eta0 must be nonnegative");
  require(c.thermo.eta1 >= 0.0, "thermo.eta1", "eta1 must be nonnegative");
  require(c.p_inf > 0.0, "thermo.P_inf", "P_inf must be positive");

  for (const char* name : {"rho", "u", "theta"}) {
    const ModeTerm& m = name[0] == 'r' ? c.rho : name[0] == 'u' ? c.u : c.theta;
    require(m.mode >= 0, std::string("profile.") + name + "_mode", std::string(name) + "_mode must be nonnegative");
  }
  for (const char* name : {"rho", "theta"}) {
    const ModeTerm& m = name[0] == 'r' ? c.rho : c.theta;
    require(m.base - std::abs(m.amp) > 0.0, std::string("profile.") + name + "_amp",
            std::string(name) + " profile must stay positive: need |" + name + "_amp| < " + name + "_base");
  }
  const bool u_vanishes = c.u.base == 0.0 && (c.u.sine || c.u.amp == 0.0);
  require(u_vanishes, c.u.base != 0.0 ? "profile.u_base" : "profile.u_shape",
          "u profile must vanish at y = 0 and y = 1: use u_base = 0 and u_shape = sin");

  require(c.perturbation.delta >= 0.0, "perturbation.delta", "delta must be nonnegative");
  require(c.perturbation.alpha >= 0.0, "perturbation.alpha", "alpha must be nonnegative");
  require(c.perturbation.mode1 >= 1, "perturbation.mode1", "mode1 must be at least 1");
  require(c.perturbation.mode2 >= 1, "perturbation.mode2", "mode2 must be at least 1");

  require(!c.epsilons.empty(), "sweep.epsilons", "epsilons must not be empty");
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    require(c.epsilons[i] > 0.0, "sweep.epsilons", "epsilons must be positive");
    if (i > 0)
      require(c.epsilons[i] < c.epsilons[i - 1], "sweep.epsilons", "epsilons must be strictly decreasing");
  }
  require(!c.r.empty(), "sweep.r", "r must not be empty");
  for (double r : c.r) require(r >= 1.0 && r < 2.0, "sweep.r", "every r must lie in [1, 2)");
  require(c.grid.n1 >= 2, "sweep.n1", "n1 must be at least 2");
  require(c.grid.n2 >= 2, "sweep.n2", "n2 must be at least 2");
  require(c.grid.n3 >= 4, "sweep.n3", "n3 must be at least 4");
  require(c.t_final > 0.0, "sweep.T_final", "T_final must be positive");
  require(c.outputs >= 1, "sweep.outputs", "outputs must be at least 1");
  require(c.cfl > 0.0 && c.cfl <= 1.0, "sweep.cfl", "cfl must lie in (0, 1]");
  require(c.cross_section.b > c.cross_section.a && c.cross_section.d > c.cross_section.c, "sweep.cross_section",
          "cross_section needs a < b and c < d");
  require(c.snapshot_stride >= 0, "output.snapshot_stride", "snapshot_stride must be nonnegative");
}

}  // namespace

ThermoModel SweepConfig::model() const {
  const PressureClosure closure_fn =
      closure == "saturating" ? PressureClosure::saturating(p_inf) : PressureClosure::power_sum(p_linear, p_inf);
  return ThermoModel(thermo, closure_fn);
}

ProfileSpec SweepConfig::profile() const { return make_profile(rho, u, theta); }

SweepConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.mark.line + 1, e.msg);
  }
  SweepConfig config;
  LineOf line_of_key;
  if (root.IsNull()) {
    validate(config, line_of_key);
    return config;
  }
  if (!root.IsMap()) throw ConfigError(line_of(root), "top level must be a mapping of sections");
  for (const auto& section : root) {
    const std::string name = section.first.Scalar();
    const auto table = tables().find(name);
    if (table == tables().end()) throw ConfigError(line_of(section.first), "unknown section '" + name + "'");
    if (section.second.IsNull()) continue;
    if (!section.second.IsMap())
      throw ConfigError(line_of(section.second), "section '" + name + "' must be a mapping of keys");
    for (const auto& entry : section.second) {
      const std::string key = entry.first.Scalar();
      const int line = line_of(entry.first);
      const auto setter = table->second.find(key);
      if (setter == table->second.end()) throw ConfigError(line, "unknown key '" + key + "' in section '" + name + "'");
      const std::string qualified = name + "." + key;
      if (line_of_key.lines.contains(qualified))
        throw ConfigError(line, "duplicate key '" + key + "' in section '" + name + "'");
      line_of_key.lines[qualified] = line;
      if (entry.second.IsNull()) throw ConfigError(line, "key '" + key + "' has no value");
      setter->second(config, entry.second);
    }
  }
  validate(config, line_of_key);
  return config;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_text(const SweepConfig& c) {
  YAML::Emitter o;
  o.SetDoublePrecision(17);
  const auto mode = [&](const char* name, const ModeTerm& m) {
    const std::string n(name);
    o << YAML::Key << n + "_base" << YAML::Value << m.base << YAML::Key << n + "_amp" << YAML::Value << m.amp
      << YAML::Key << n + "_mode" << YAML::Value << m.mode << YAML::Key << n + "_shape" << YAML::Value
      << (m.sine ? "sin" : "cos");
  };
  const auto list = [&](const std::vector<double>& v) {
    o << YAML::Flow << YAML::BeginSeq;
    for (double x : v) o << x;
    o << YAML::EndSeq;
  };
  o << YAML::BeginMap;
  o << YAML::Key << "thermo" << YAML::Value << YAML::BeginMap << YAML::Key << "a" << YAML::Value << c.thermo.a
    << YAML::Key << "mu0" << YAML::Value << c.thermo.mu0 << YAML::Key << "mu1" << YAML::Value << c.thermo.mu1
    << YAML::Key << "eta0" << YAML::Value << c.thermo.eta0 << YAML::Key << "eta1" << YAML::Value << c.thermo.eta1
    << YAML::Key << "kappa0" << YAML::Value << c.thermo.kappa0 << YAML::Key << "kappa2" << YAML::Value
    << c.thermo.kappa2 << YAML::Key << "kappa3" << YAML::Value << c.thermo.kappa3 << YAML::Key << "S0" << YAML::Value
    << c.thermo.S0 << YAML::Key << "P_closure" << YAML::Value << c.closure << YAML::Key << "P_linear" << YAML::Value
    << c.p_linear << YAML::Key << "P_inf" << YAML::Value << c.p_inf << YAML::EndMap;
  o << YAML::Key << "profile" << YAML::Value << YAML::BeginMap;
  mode("rho", c.rho);
  mode("u", c.u);
  mode("theta", c.theta);
  o << YAML::EndMap;
  o << YAML::Key << "perturbation" << YAML::Value << YAML::BeginMap << YAML::Key << "delta" << YAML::Value
    << c.perturbation.delta << YAML::Key << "alpha" << YAML::Value << c.perturbation.alpha << YAML::Key << "mode1"
    << YAML::Value << c.perturbation.mode1 << YAML::Key << "mode2" << YAML::Value << c.perturbation.mode2
    << YAML::EndMap;
  o << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap << YAML::Key << "epsilons" << YAML::Value;
  list(c.epsilons);
  o << YAML::Key << "r" << YAML::Value;
  list(c.r);
  o << YAML::Key << "n1" << YAML::Value << c.grid.n1 << YAML::Key << "n2" << YAML::Value << c.grid.n2 << YAML::Key
    << "n3" << YAML::Value << c.grid.n3 << YAML::Key << "T_final" << YAML::Value << c.t_final << YAML::Key
    << "outputs" << YAML::Value << c.outputs << YAML::Key << "cfl" << YAML::Value << c.cfl << YAML::Key << "seed"
    << YAML::Value << c.seed << YAML::Key << "cross_section" << YAML::Value;
  list({c.cross_section.a, c.cross_section.b, c.cross_section.c, c.cross_section.d});
  o << YAML::EndMap;
  o << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  if (!c.out_dir.empty()) o << YAML::Key << "dir" << YAML::Value << c.out_dir;
  o << YAML::Key << "snapshot_stride" << YAML::Value << c.snapshot_stride << YAML::Key << "snapshot_format"
    << YAML::Value << (c.snapshot_format == SnapshotFormat::kBinary ? "binary" : "csv") << YAML::EndMap;
  o << YAML::EndMap;
  return std::string(o.c_str()) + "\n";
}

}  // namespace nsf
