#include "twophase/io.hpp"

#include <cstdio>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "twophase/errors.hpp"

namespace twophase {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string order_label(int k) {
  return k == EnergyLaw::kInfinite ? "inf" : std::to_string(k);
}

int order_from_label(const std::string& label) {
  if (label == "inf") return EnergyLaw::kInfinite;
  try {
    size_t pos = 0;
    const int k = std::stoi(label, &pos);
    if (pos != label.size()) throw ParseError("bad truncation order: " + label);
    return k;
  } catch (const std::exception&) {
    throw ParseError("bad truncation order: " + label);
  }
}

void write_field_csv(const std::filesystem::path& path, const Mesh& mesh, const ScalarField& u) {
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw DimensionMismatch("write_field_csv: field length != node count");
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  if (mesh.dim() == 1) {
    out << "x,u\n";
    for (int i = 0; i < mesh.node_count(); ++i)
      out << fmt17(mesh.nodes[i].x) << ',' << fmt17(u[i]) << '\n';
  } else {
    out << "x,y,u\n";
    for (int i = 0; i < mesh.node_count(); ++i)
      out << fmt17(mesh.nodes[i].x) << ',' << fmt17(mesh.nodes[i].y) << ',' << fmt17(u[i])
          << '\n';
  }
}

ScalarField read_field_csv(const std::filesystem::path& path, const Mesh& mesh) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty field csv: " + path.string());
  ScalarField u;
  u.reserve(mesh.node_count());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t comma = line.rfind(',');
    if (comma == std::string::npos) throw ParseError("bad field csv row: " + line);
    u.push_back(std::stod(line.substr(comma + 1)));
  }
  if (static_cast<int>(u.size()) != mesh.node_count())
    throw ValidationError("field csv row count does not match the mesh");
  return u;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  out << "stage_k,stage_delta,iter,energy,grad_norm,step\n";
  for (const TraceRow& r : trace)
    out << order_label(r.k) << ',' << fmt17(r.delta) << ',' << r.iter << ',' << fmt17(r.energy)
        << ',' << fmt17(r.grad_norm) << ',' << fmt17(r.step) << '\n';
}

void write_polylines_csv(const std::filesystem::path& path,
                         const std::vector<Polyline>& polylines) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  out << "polyline_id,vertex_index,x,y\n";
  for (size_t p = 0; p < polylines.size(); ++p)
    for (size_t v = 0; v < polylines[p].size(); ++v)
      out << p << ',' << v << ',' << fmt17(polylines[p][v].x) << ','
          << fmt17(polylines[p][v].y) << '\n';
}

void write_fb_stats_csv(const std::filesystem::path& path, const std::vector<FbStatsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  out << "epsilon,band_measure,band_dirichlet,perimeter_plus,perimeter_minus\n";
  for (const FbStatsRow& r : rows)
    out << fmt17(r.epsilon) << ',' << fmt17(r.band_measure) << ',' << fmt17(r.band_dirichlet)
        << ',' << fmt17(r.perimeter_plus) << ',' << fmt17(r.perimeter_minus) << '\n';
}

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  out << "k,energy,linf_diff_to_final,grad_norm\n";
  for (const ConvergenceRow& r : rows)
    out << order_label(r.k) << ',' << fmt17(r.energy) << ',' << fmt17(r.linf_diff_to_final)
        << ',' << fmt17(r.grad_norm) << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string());
  out << text;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace twophase
