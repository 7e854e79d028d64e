#include "kgw/field_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "kgw/config.hpp"

namespace kgw {
namespace {

std::string num(double x) { return format_double(x); }

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number '" + s + "' in field file");
  }
  if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "' in field file");
  return v;
}

}  // namespace

void write_field(std::ostream& out, const GridSpec& grid, const RealField& field) {
  require_field_on_grid(grid, field);
  out << "# kind=" << to_string(grid.kind) << " n=" << grid.dimension << " R=" << num(grid.extent)
      << " M=" << grid.cells << " components=2\n";
  for (std::size_t i = 0; i < grid.cells; ++i)
    out << num(grid.nodes[i]) << ' ' << num(field.u[0][i]) << ' ' << num(field.u[1][i]) << '\n';
}

void write_field(const std::filesystem::path& path, const GridSpec& grid, const RealField& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_field(out, grid, field);
}

LoadedField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw std::invalid_argument("field file lacks a header");
  std::map<std::string, std::string> kv;
  std::istringstream hs(line.substr(2));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"kind", "n", "R", "M", "components"})
    if (!kv.count(key)) throw std::invalid_argument(std::string("field header misses ") + key);
  if (kv["components"] != "2") throw std::invalid_argument("field files carry two components");

  LoadedField lf;
  lf.grid = build_grid(grid_kind_from_string(kv["kind"]), static_cast<int>(to_double(kv["n"])), to_double(kv["R"]),
                       static_cast<std::size_t>(to_double(kv["M"])));
  lf.field = RealField(lf.grid.cells);
  for (std::size_t i = 0; i < lf.grid.cells; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("field file ends early");
    std::istringstream rs(line);
    std::string a, b, c, extra;
    if (!(rs >> a >> b >> c) || (rs >> extra)) throw std::invalid_argument("malformed field row");
    to_double(a);
    lf.field.u[0][i] = to_double(b);
    lf.field.u[1][i] = to_double(c);
  }
  return lf;
}

LoadedField read_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  return read_field(in);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec) {
  out << "t,E,C1,C2,dist,V\n";
  for (const auto& s : rec.samples)
    out << num(s.t) << ',' << num(s.energy) << ',' << num(s.charge[0]) << ',' << num(s.charge[1]) << ','
        << num(s.dist) << ',' << num(s.lyapunov) << '\n';
}

void write_stability_csv(std::ostream& out, const StabilityReport& rep) {
  out << "eps,max_dist,max_V,blowup\n";
  for (const auto& r : rep.rows)
    out << num(r.eps) << ',' << num(r.max_dist) << ',' << num(r.max_V) << ',' << (r.blowup ? 1 : 0) << '\n';
}

void write_subadditivity_csv(std::ostream& out, const SubadditivityTable& table) {
  out << "tau1,tau2,I_tau,I_rest,I_rho,margin,tolerance,converged,strictly_positive\n";
  for (const auto& r : table.rows)
    out << num(r.tau[0]) << ',' << num(r.tau[1]) << ',' << num(r.I_tau) << ',' << num(r.I_rest) << ','
        << num(r.I_rho) << ',' << num(r.margin) << ',' << num(r.tolerance) << ',' << (r.converged ? 1 : 0) << ','
        << (r.strictly_positive ? 1 : 0) << '\n';
}

void write_trace_csv(std::ostream& out, const GroundState& gs) {
  out << "iteration,value,dirichlet\n";
  for (std::size_t k = 0; k < gs.trace.size(); ++k)
    out << k << ',' << num(gs.trace[k].value) << ',' << num(gs.trace[k].dirichlet) << '\n';
}

}  // namespace kgw
