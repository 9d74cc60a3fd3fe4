#ifndef CRWB_IO_HPP
#define CRWB_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "crwb/automata.hpp"
#include "crwb/extended_real.hpp"
#include "crwb/traffic.hpp"
#include "crwb/ultradiscrete.hpp"

namespace crwb::io {

/// Shortest decimal that parses back to exactly the same double.
std::string format_double(double v);

/// Write text/binary content atomically (temp file + rename), so readers
/// never observe a truncated artifact.
void write_file(const std::filesystem::path& path, const std::string& content);

/// One CSV row per time step, header "step,0,1,...,N-1".
std::string trajectory_csv(const std::vector<PeriodicField<double>>& layers);
std::string trajectory_csv(const std::vector<PeriodicField<ExtendedReal>>& layers);

/// step,sum_u,flow,min_u,max_u,min_vt,max_vt rows for a trajectory.
std::string diagnostics_csv(const Trajectory& traj);

/// Per-step inflow field X (same layout as the trajectory CSV).
std::string inflow_csv(const Trajectory& traj);

/// P5 raster, one row per time step (time increases downward); value v maps
/// to gray round(255 (1 - v/L)) so 0 is white and L is black.
std::string pgm_raster(const std::vector<PeriodicField<double>>& layers, double capacity);

/// density,mean_flow,flow_std,samples rows.
std::string diagram_csv(const std::vector<DiagramPoint>& points);

/// Standalone scatter plot of a fundamental diagram with the conjectured
/// trapezoid overlaid (dashed).
std::string diagram_svg(const std::vector<DiagramPoint>& points, double capacity, int vt_min);

std::string limit_report_json(const LimitReport& report);

std::string transition_estimate_json(const TransitionEstimate& est);

}  // namespace crwb::io

#endif
