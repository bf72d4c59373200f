#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "twophase/freeboundary.hpp"
#include "twophase/mesh.hpp"
#include "twophase/solver.hpp"

namespace twophase {

/// Shortest exact decimal rendering at 17 significant digits.
std::string fmt17(double x);

/// Truncation order as written in files: the integer, or "inf".
std::string order_label(int k);
int order_from_label(const std::string& label);

/// Nodal field CSV: header "x,u" (1D) or "x,y,u", one row per node in
/// row-major node order.
void write_field_csv(const std::filesystem::path& path, const Mesh& mesh, const ScalarField& u);
ScalarField read_field_csv(const std::filesystem::path& path, const Mesh& mesh);

/// Solver trace CSV: stage_k,stage_delta,iter,energy,grad_norm,step.
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);

/// Free-boundary polylines CSV: polyline_id,vertex_index,x,y.
void write_polylines_csv(const std::filesystem::path& path,
                         const std::vector<Polyline>& polylines);

struct FbStatsRow {
  double epsilon = 0.0;
  double band_measure = 0.0;
  double band_dirichlet = 0.0;
  double perimeter_plus = 0.0;
  double perimeter_minus = 0.0;
};

/// Band statistics CSV:
/// epsilon,band_measure,band_dirichlet,perimeter_plus,perimeter_minus.
void write_fb_stats_csv(const std::filesystem::path& path, const std::vector<FbStatsRow>& rows);

struct ConvergenceRow {
  int k = 0;
  double energy = 0.0;
  double linf_diff_to_final = 0.0;
  double grad_norm = 0.0;
};

/// Truncation sweep CSV: k,energy,linf_diff_to_final,grad_norm.
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// FNV-1a 64-bit content digest, lower-case hex.
std::string content_hash(const std::string& bytes);

}  // namespace twophase
