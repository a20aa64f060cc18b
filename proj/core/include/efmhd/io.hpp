/// \file io.hpp
/// \brief Snapshots (CSV and rectilinear VTK), diagnostics CSV and
/// sampling of the polynomial solution along lines.
///
/// Snapshot CSV layout: `# key = value` metadata lines, one header row, then
/// one row per solution node with its coordinates, the 8 conserved fields and
/// the pressure. Values are written with 17 significant digits so that a
/// snapshot reads back bit-identical.
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "efmhd/field.hpp"
#include "efmhd/mesh.hpp"
#include "efmhd/reference_element.hpp"

namespace efmhd {

struct Snapshot {
  std::string case_name;
  double time = 0.0;
  int order = 0;
  int dim = 1;
  std::array<int, 2> cells{1, 1};
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{1.0, 1.0};
  double gamma = 5.0 / 3.0;
  double mu = 0.0;
  Field field;
};

void write_snapshot_csv(std::ostream& os, const Snapshot& s);
void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& s);
Snapshot read_snapshot_csv(std::istream& is);
Snapshot read_snapshot_csv(const std::filesystem::path& path);

/// Legacy ASCII rectilinear grid. Nodes shared between elements are
/// averaged; p = 0 data is written per cell.
void write_vtk(const std::filesystem::path& path, const Snapshot& s);

/// Geometry of a snapshot (periodic boundaries; only used for sampling).
StructuredMesh snapshot_mesh(const Snapshot& s);

/// Polynomial solution at a physical point.
ConservedState evaluate_at(const Field& u, const ReferenceElement& re, const StructuredMesh& mesh, double x,
                           double y = 0.0);

struct LineSample {
  double x = 0.0;
  double y = 0.0;
  ConservedState u;
};

/// Samples the solution along the line where coordinate `axis` ('x' or 'y')
/// equals `coord`, with `per_element` equispaced points per crossed element.
/// On 1D snapshots the whole domain is sampled and `coord` is ignored.
std::vector<LineSample> sample_line(const Snapshot& s, char axis, double coord, int per_element);
void write_line_csv(std::ostream& os, const std::vector<LineSample>& samples, double gamma);

struct DiagnosticsRow {
  long step = 0;
  double time = 0.0;
  double max_limiting = 0.0;
  int he_activations = 0;
  int hp_activations = 0;
  int max_iterations = 0;
  int filtered_elements = 0;
  double min_rho = 0.0;
  double min_pressure = 0.0;
  double min_entropy_margin = 0.0;
  double divb_l1 = 0.0;
  double total_mass = 0.0;
};

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& r);
std::vector<DiagnosticsRow> read_diagnostics_csv(std::istream& is);

}  // namespace efmhd
