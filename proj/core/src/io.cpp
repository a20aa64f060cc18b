#include "efmhd/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "efmhd/polynomial.hpp"

namespace efmhd {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

const char* kFieldNames[kNumFields] = {"rho", "mom_x", "mom_y", "mom_z", "B_x", "B_y", "B_z", "E"};

}  // namespace

void write_snapshot_csv(std::ostream& os, const Snapshot& s) {
  const ReferenceElement re = build_reference_element(s.order, s.dim);
  const StructuredMesh mesh = snapshot_mesh(s);
  const GasModel gas(s.gamma);
  os << "# case = " << s.case_name << '\n';
  os << "# time = " << num(s.time) << '\n';
  os << "# order = " << s.order << '\n';
  os << "# dim = " << s.dim << '\n';
  os << "# cells = " << s.cells[0] << ' ' << s.cells[1] << '\n';
  os << "# lower = " << num(s.lower[0]) << ' ' << num(s.lower[1]) << '\n';
  os << "# upper = " << num(s.upper[0]) << ' ' << num(s.upper[1]) << '\n';
  os << "# gamma = " << num(s.gamma) << '\n';
  os << "# mu = " << num(s.mu) << '\n';
  os << "element,node,x,y";
  for (const char* n : kFieldNames) os << ',' << n;
  os << ",P\n";
  for (int e = 0; e < s.field.num_elements(); ++e) {
    for (int k = 0; k < re.num_nodes; ++k) {
      const auto x = mesh.map_point(e, re.nodes[k][0], re.nodes[k][1]);
      const ConservedState& u = s.field.at(e, k);
      os << e << ',' << k << ',' << num(x[0]) << ',' << num(x[1]);
      for (int c = 0; c < kNumFields; ++c) os << ',' << num(u[c]);
      os << ',' << num(pressure(u, gas)) << '\n';
    }
  }
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_snapshot_csv(os, s);
}

Snapshot read_snapshot_csv(std::istream& is) {
  Snapshot s;
  std::map<std::string, std::string> meta;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    meta[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const char* key) {
    auto it = meta.find(key);
    if (it == meta.end()) throw std::runtime_error(std::string("snapshot is missing '") + key + "'");
    return it->second;
  };
  s.case_name = need("case");
  s.time = to_double(need("time"));
  s.order = std::stoi(need("order"));
  s.dim = std::stoi(need("dim"));
  {
    std::istringstream c(need("cells")), l(need("lower")), u(need("upper"));
    c >> s.cells[0] >> s.cells[1];
    std::string a, b;
    l >> a >> b;
    s.lower = {to_double(a), to_double(b)};
    u >> a >> b;
    s.upper = {to_double(a), to_double(b)};
  }
  s.gamma = to_double(need("gamma"));
  if (meta.count("mu")) s.mu = to_double(meta["mu"]);

  const int n1d = s.order + 1;
  const int nodes = s.dim == 1 ? n1d : n1d * n1d;
  s.field = Field(s.cells[0] * (s.dim == 1 ? 1 : s.cells[1]), nodes);
  std::vector<char> seen(s.field.size(), 0);
  // `line` holds the column header.
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() < 4 + kNumFields) throw std::runtime_error("short snapshot row: " + line);
    const int e = std::stoi(cols[0]);
    const int k = std::stoi(cols[1]);
    if (e < 0 || e >= s.field.num_elements() || k < 0 || k >= nodes) {
      throw std::runtime_error("snapshot row out of range: " + line);
    }
    ConservedState& u = s.field.at(e, k);
    for (int c = 0; c < kNumFields; ++c) u[c] = to_double(cols[4 + c]);
    seen[static_cast<std::size_t>(e) * nodes + k] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw std::runtime_error("snapshot is missing nodes");
  return s;
}

Snapshot read_snapshot_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return read_snapshot_csv(is);
}

StructuredMesh snapshot_mesh(const Snapshot& s) {
  return build_mesh(s.dim, s.cells, s.lower, s.upper, BoundarySpec::all_periodic());
}

void write_vtk(const std::filesystem::path& path, const Snapshot& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  const ReferenceElement re = build_reference_element(s.order, s.dim);
  const StructuredMesh mesh = snapshot_mesh(s);
  const GasModel gas(s.gamma);
  const int p = s.order;
  const int ny_cells = s.dim == 1 ? 1 : s.cells[1];

  std::array<std::vector<double>, 2> coords;
  for (int a = 0; a < 2; ++a) {
    const int n = a == 0 ? s.cells[0] : ny_cells;
    if (a == 1 && s.dim == 1) {
      coords[a] = {0.0};
      continue;
    }
    if (p == 0) {
      for (int i = 0; i <= n; ++i) coords[a].push_back(mesh.lower[a] + mesh.h[a] * i);
    } else {
      for (int i = 0; i < n; ++i) {
        for (int k = i == 0 ? 0 : 1; k <= p; ++k) {
          coords[a].push_back(mesh.lower[a] + mesh.h[a] * (i + 0.5 * (re.nodes_1d[k] + 1.0)));
        }
      }
    }
  }

  // Values on the VTK points (p >= 1) or cells (p = 0).
  const int nx = p == 0 ? s.cells[0] : static_cast<int>(coords[0].size());
  const int ny = p == 0 ? ny_cells : static_cast<int>(coords[1].size());
  std::vector<ConservedState> acc(static_cast<std::size_t>(nx) * ny);
  std::vector<int> count(acc.size(), 0);
  for (int e = 0; e < s.field.num_elements(); ++e) {
    const auto [ei, ej] = mesh.element_coords(e);
    for (int k = 0; k < re.num_nodes; ++k) {
      const int ki = k % re.n1d;
      const int kj = k / re.n1d;
      const int gi = p == 0 ? ei : ei * p + ki;
      const int gj = p == 0 ? ej : (s.dim == 1 ? 0 : ej * p + kj);
      const std::size_t g = static_cast<std::size_t>(gi) + static_cast<std::size_t>(nx) * gj;
      acc[g] += s.field.at(e, k);
      ++count[g];
    }
  }
  for (std::size_t g = 0; g < acc.size(); ++g) acc[g] *= 1.0 / std::max(count[g], 1);

  os << "# vtk DataFile Version 3.0\n";
  os << s.case_name << " t=" << num(s.time) << "\nASCII\nDATASET RECTILINEAR_GRID\n";
  os << "DIMENSIONS " << coords[0].size() << ' ' << coords[1].size() << " 1\n";
  const char* axis_name[2] = {"X_COORDINATES", "Y_COORDINATES"};
  for (int a = 0; a < 2; ++a) {
    os << axis_name[a] << ' ' << coords[a].size() << " double\n";
    for (double c : coords[a]) os << num(c) << ' ';
    os << '\n';
  }
  os << "Z_COORDINATES 1 double\n0\n";
  os << (p == 0 ? "CELL_DATA " : "POINT_DATA ") << acc.size() << '\n';
  auto scalar = [&](const char* name, auto&& f) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const auto& u : acc) os << num(f(u)) << '\n';
  };
  auto vector = [&](const char* name, auto&& f) {
    os << "VECTORS " << name << " double\n";
    for (const auto& u : acc) {
      const Vec3 v = f(u);
      os << num(v.x) << ' ' << num(v.y) << ' ' << num(v.z) << '\n';
    }
  };
  scalar("density", [](const ConservedState& u) { return u.rho(); });
  scalar("pressure", [&](const ConservedState& u) { return pressure(u, gas); });
  scalar("energy", [](const ConservedState& u) { return u.energy(); });
  vector("velocity", [](const ConservedState& u) { return (1.0 / u.rho()) * u.momentum(); });
  vector("magnetic_field", [](const ConservedState& u) { return u.magnetic(); });
}

ConservedState evaluate_at(const Field& u, const ReferenceElement& re, const StructuredMesh& mesh, double x,
                           double y) {
  std::array<int, 2> idx{0, 0};
  std::array<double, 2> local{0.0, 0.0};
  const std::array<double, 2> pt{x, y};
  for (int a = 0; a < mesh.dim; ++a) {
    const double t = (pt[a] - mesh.lower[a]) / mesh.h[a];
    int i = static_cast<int>(std::floor(t));
    i = std::clamp(i, 0, mesh.cells[a] - 1);
    idx[a] = i;
    local[a] = std::clamp(2.0 * (t - i) - 1.0, -1.0, 1.0);
  }
  const int e = mesh.element_index(idx[0], idx[1]);
  const auto lx = poly::lagrange_weights(re.nodes_1d, local[0]);
  const std::vector<double> ly = mesh.dim == 1 ? std::vector<double>{1.0} : poly::lagrange_weights(re.nodes_1d, local[1]);
  ConservedState out;
  const int nj = mesh.dim == 1 ? 1 : re.n1d;
  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i < re.n1d; ++i) {
      const double w = lx[i] * ly[j];
      if (w == 0.0) continue;
      out += w * u.at(e, re.node_index(i, j));
    }
  }
  return out;
}

std::vector<LineSample> sample_line(const Snapshot& s, char axis, double coord, int per_element) {
  if (axis != 'x' && axis != 'y') throw std::invalid_argument("slice axis must be 'x' or 'y'");
  if (per_element < 1) throw std::invalid_argument("need at least one sample per element");
  const ReferenceElement re = build_reference_element(s.order, s.dim);
  const StructuredMesh mesh = snapshot_mesh(s);
  // The line runs along `along`; coordinate `fixed` is held at coord.
  const int fixed = s.dim == 1 ? 1 : (axis == 'x' ? 0 : 1);
  const int along = s.dim == 1 ? 0 : 1 - fixed;
  if (s.dim == 2 && !(coord >= mesh.lower[fixed] && coord <= mesh.upper[fixed])) {
    throw std::invalid_argument("slice coordinate outside the domain");
  }
  std::vector<LineSample> out;
  for (int i = 0; i < mesh.cells[along]; ++i) {
    for (int m = 0; m < per_element; ++m) {
      const double xi = -1.0 + (2.0 * m + 1.0) / per_element;
      std::array<double, 2> pt{};
      pt[along] = mesh.lower[along] + mesh.h[along] * (i + 0.5 * (xi + 1.0));
      pt[fixed] = s.dim == 1 ? 0.0 : coord;
      out.push_back({pt[0], pt[1], evaluate_at(s.field, re, mesh, pt[0], pt[1])});
    }
  }
  return out;
}

void write_line_csv(std::ostream& os, const std::vector<LineSample>& samples, double gamma) {
  const GasModel gas(gamma);
  os << "x,y,rho,v_x,v_y,v_z,B_x,B_y,B_z,P\n";
  for (const auto& s : samples) {
    const Vec3 v = (1.0 / s.u.rho()) * s.u.momentum();
    const Vec3 b = s.u.magnetic();
    os << num(s.x) << ',' << num(s.y) << ',' << num(s.u.rho()) << ',' << num(v.x) << ',' << num(v.y) << ','
       << num(v.z) << ',' << num(b.x) << ',' << num(b.y) << ',' << num(b.z) << ',' << num(pressure(s.u, gas))
       << '\n';
  }
}

void write_diagnostics_header(std::ostream& os) {
  os << "step,time,max_limiting,he_activations,hp_activations,max_iterations,filtered_elements,min_rho,"
        "min_pressure,min_entropy_margin,divb_l1,total_mass\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& r) {
  os << r.step << ',' << num(r.time) << ',' << num(r.max_limiting) << ',' << r.he_activations << ','
     << r.hp_activations << ',' << r.max_iterations << ',' << r.filtered_elements << ',' << num(r.min_rho) << ','
     << num(r.min_pressure) << ',' << num(r.min_entropy_margin) << ',' << num(r.divb_l1) << ','
     << num(r.total_mass) << '\n';
}

std::vector<DiagnosticsRow> read_diagnostics_csv(std::istream& is) {
  std::vector<DiagnosticsRow> rows;
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 12) throw std::runtime_error("malformed diagnostics row: " + line);
    DiagnosticsRow r;
    r.step = std::stol(c[0]);
    r.time = to_double(c[1]);
    r.max_limiting = to_double(c[2]);
    r.he_activations = std::stoi(c[3]);
    r.hp_activations = std::stoi(c[4]);
    r.max_iterations = std::stoi(c[5]);
    r.filtered_elements = std::stoi(c[6]);
    r.min_rho = to_double(c[7]);
    r.min_pressure = to_double(c[8]);
    r.min_entropy_margin = to_double(c[9]);
    r.divb_l1 = to_double(c[10]);
    r.total_mass = to_double(c[11]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace efmhd
