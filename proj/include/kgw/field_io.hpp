#pragma once

// Text formats. Numbers are written with 17 significant digits so every
// double survives a round trip.
//
// Field file:
//   # kind=radial n=3 R=16 M=512 components=2
//   <node> <u1> <u2>        (one row per cell)

#include <filesystem>
#include <iosfwd>

#include "kgw/dynamics.hpp"
#include "kgw/grid.hpp"
#include "kgw/model.hpp"
#include "kgw/solve.hpp"
#include "kgw/stability.hpp"

namespace kgw {

void write_field(std::ostream& out, const GridSpec& grid, const RealField& field);
void write_field(const std::filesystem::path& path, const GridSpec& grid, const RealField& field);

struct LoadedField {
  GridSpec grid;
  RealField field;
};

/// Throws std::invalid_argument on a malformed header or row.
LoadedField read_field(std::istream& in);
LoadedField read_field(const std::filesystem::path& path);

/// t,E,C1,C2,dist,V
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec);
/// eps,max_dist,max_V,blowup
void write_stability_csv(std::ostream& out, const StabilityReport& rep);
/// tau1,tau2,I_tau,I_rest,I_rho,margin,tolerance,converged,strictly_positive
void write_subadditivity_csv(std::ostream& out, const SubadditivityTable& table);
/// iteration,value,dirichlet
void write_trace_csv(std::ostream& out, const GroundState& gs);

}  // namespace kgw
