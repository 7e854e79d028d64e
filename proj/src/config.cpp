#include "kgw/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace kgw {
namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("malformed number for " + key + ": '" + raw + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("malformed integer for " + key + ": '" + raw + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("malformed boolean for " + key + ": '" + raw + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::istringstream in(raw);
  std::string tok;
  while (in >> tok) out.push_back(parse_double(key, tok));
  return out;
}

Pair parse_pair(const std::string& key, const std::string& raw) {
  const auto v = parse_list(key, raw);
  if (v.size() != 2) throw ConfigError(key + " needs two values");
  return {v[0], v[1]};
}

// Reads the keys of one section, rejecting unknown ones.
class Section {
 public:
  Section(const pt::ptree& root, const std::string& name, std::set<std::string> known) : name_(name) {
    if (auto child = root.get_child_optional(name)) {
      present_ = true;
      for (const auto& kv : *child) {
        if (!known.count(kv.first)) throw ConfigError("unknown key " + name + "." + kv.first);
        values_.emplace_back(kv.first, kv.second.data());
      }
    }
  }

  bool present() const { return present_; }

  const std::string* raw(const std::string& key) const {
    for (const auto& kv : values_)
      if (kv.first == key) return &kv.second;
    return nullptr;
  }

  void get(const std::string& key, double& out) const {
    if (auto r = raw(key)) out = parse_double(name_ + "." + key, *r);
  }
  void get(const std::string& key, std::size_t& out) const {
    if (auto r = raw(key)) out = static_cast<std::size_t>(parse_uint(name_ + "." + key, *r));
  }
  void get(const std::string& key, int& out) const {
    if (auto r = raw(key)) out = static_cast<int>(parse_uint(name_ + "." + key, *r));
  }
  void get(const std::string& key, bool& out) const {
    if (auto r = raw(key)) out = parse_bool(name_ + "." + key, *r);
  }

 private:
  std::string name_;
  bool present_ = false;
  std::vector<std::pair<std::string, std::string>> values_;
};

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GridSpec RunConfig::make_grid() const { return build_grid(grid.kind, grid.dimension, grid.extent, grid.cells); }

RunConfig parse_config(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message());
  }
  const std::set<std::string> sections{"grid", "model", "constraint", "solver", "dynamics",
                                       "subadd", "rearr", "output"};
  for (const auto& kv : root)
    if (!sections.count(kv.first)) throw ConfigError("unknown section [" + kv.first + "]");

  RunConfig c;
  {
    Section s(root, "grid", {"kind", "n", "R", "M"});
    if (auto r = s.raw("kind")) {
      try {
        c.grid.kind = grid_kind_from_string(trim(*r));
      } catch (const std::invalid_argument&) {
        throw ConfigError("unknown grid kind '" + trim(*r) + "'");
      }
    }
    if (c.grid.kind == GridKind::line) c.grid.dimension = 1;
    s.get("n", c.grid.dimension);
    s.get("R", c.grid.extent);
    s.get("M", c.grid.cells);
  }
  {
    Section s(root, "model", {"beta", "gamma", "a", "p", "m1", "m2"});
    s.get("beta", c.model.beta);
    s.get("gamma", c.model.gamma);
    s.get("a", c.model.a);
    s.get("p", c.model.p);
    s.get("m1", c.model.m1);
    s.get("m2", c.model.m2);
    c.model.dimension = c.grid.dimension;
  }
  {
    Section s(root, "constraint", {"rho", "charge"});
    const auto* rho = s.raw("rho");
    const auto* charge = s.raw("charge");
    if (rho && charge) throw ConfigError("constraint section sets both rho and charge");
    if (rho) c.constraint = {ConstraintKind::mass, parse_pair("constraint.rho", *rho)};
    if (charge) c.constraint = {ConstraintKind::charge, parse_pair("constraint.charge", *charge)};
    for (double v : c.constraint.values)
      if (!(v > 0.0)) throw ConfigError("constraint values must be positive");
  }
  {
    Section s(root, "solver",
              {"step", "tol", "max_iters", "backtrack", "seed", "scheme", "sweep_every", "patience", "trace"});
    s.get("step", c.solver.step);
    s.get("tol", c.solver.tol);
    s.get("max_iters", c.solver.max_iters);
    s.get("backtrack", c.solver.backtrack);
    if (auto r = s.raw("seed")) c.solver.seed = parse_uint("solver.seed", *r);
    if (auto r = s.raw("scheme")) {
      try {
        c.solver.scheme = step_scheme_from_string(trim(*r));
      } catch (const std::invalid_argument&) {
        throw ConfigError("unknown solver scheme '" + trim(*r) + "'");
      }
    }
    s.get("sweep_every", c.solver.sweep_every);
    s.get("patience", c.solver.patience);
    s.get("trace", c.solver.record_trace);
  }
  {
    Section s(root, "dynamics", {"dt", "horizon", "stride", "epsilons", "width", "gradient_weight"});
    s.get("dt", c.dynamics.dt);
    s.get("horizon", c.dynamics.horizon);
    s.get("stride", c.dynamics.stride);
    if (auto r = s.raw("epsilons")) c.dynamics.epsilons = parse_list("dynamics.epsilons", *r);
    s.get("width", c.dynamics.width);
    s.get("gradient_weight", c.dynamics.gradient_weight);
    if (c.dynamics.dt < 0.0 || !(c.dynamics.horizon >= 0.0) || c.dynamics.stride < 1 || c.dynamics.width < 0.0 ||
        c.dynamics.gradient_weight < 0.0)
      throw ConfigError("dynamics values out of range");
  }
  {
    Section s(root, "subadd", {"splits"});
    if (auto r = s.raw("splits")) {
      c.splits.clear();
      std::istringstream in(*r);
      std::string item;
      while (std::getline(in, item, ';'))
        if (!trim(item).empty()) c.splits.push_back(parse_pair("subadd.splits", item));
    }
  }
  {
    Section s(root, "rearr", {"cells", "trials", "seed"});
    if (auto r = s.raw("cells")) {
      c.rearr.cells.clear();
      std::istringstream in(*r);
      std::string tok;
      while (in >> tok) c.rearr.cells.push_back(static_cast<std::size_t>(parse_uint("rearr.cells", tok)));
    }
    s.get("trials", c.rearr.trials);
    if (auto r = s.raw("seed")) c.rearr.seed = parse_uint("rearr.seed", *r);
  }
  {
    Section s(root, "output", {"directory"});
    if (auto r = s.raw("directory")) c.output_dir = trim(*r);
  }

  try {
    (void)c.make_grid();
    c.solver.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  return parse_config(in);
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream o;
  o << "[grid]\nkind = " << to_string(c.grid.kind) << "\nn = " << c.grid.dimension
    << "\nR = " << format_double(c.grid.extent) << "\nM = " << c.grid.cells << "\n\n";
  o << "[model]\nbeta = " << format_double(c.model.beta) << "\ngamma = " << format_double(c.model.gamma)
    << "\na = " << format_double(c.model.a) << "\np = " << format_double(c.model.p)
    << "\nm1 = " << format_double(c.model.m1) << "\nm2 = " << format_double(c.model.m2) << "\n\n";
  o << "[constraint]\n"
    << (c.constraint.kind == ConstraintKind::mass ? "rho" : "charge") << " = "
    << join({c.constraint.values[0], c.constraint.values[1]}) << "\n\n";
  o << "[solver]\nstep = " << format_double(c.solver.step) << "\ntol = " << format_double(c.solver.tol)
    << "\nmax_iters = " << c.solver.max_iters << "\nbacktrack = " << format_double(c.solver.backtrack)
    << "\nseed = " << c.solver.seed << "\nscheme = " << to_string(c.solver.scheme)
    << "\nsweep_every = " << c.solver.sweep_every << "\npatience = " << c.solver.patience
    << "\ntrace = " << (c.solver.record_trace ? "true" : "false") << "\n\n";
  o << "[dynamics]\ndt = " << format_double(c.dynamics.dt) << "\nhorizon = " << format_double(c.dynamics.horizon)
    << "\nstride = " << c.dynamics.stride << "\nepsilons = " << join(c.dynamics.epsilons)
    << "\nwidth = " << format_double(c.dynamics.width)
    << "\ngradient_weight = " << format_double(c.dynamics.gradient_weight) << "\n\n";
  o << "[subadd]\nsplits = ";
  for (std::size_t i = 0; i < c.splits.size(); ++i)
    o << (i ? "; " : "") << join({c.splits[i][0], c.splits[i][1]});
  o << "\n\n[rearr]\ncells =";
  for (auto m : c.rearr.cells) o << ' ' << m;
  o << "\ntrials = " << c.rearr.trials << "\nseed = " << c.rearr.seed << "\n\n";
  o << "[output]\ndirectory = " << c.output_dir << "\n";
  return o.str();
}

}  // namespace kgw
