#include "efmhd/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace efmhd {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"case", {"name", "mu", "left", "right", "split", "state", "blast_radius", "blast_rho", "p_inside", "p_outside",
                "b0"}},
      {"physics", {"gamma"}},
      {"mesh", {"dim", "cells", "lower", "upper"}},
      {"boundary", {"x_lower", "x_upper", "y_lower", "y_upper", "x_lower_state", "x_upper_state", "y_lower_state",
                    "y_upper_state"}},
      {"discretization", {"order", "riemann", "mode_order"}},
      {"time", {"dt", "t_end"}},
      {"filter", {"enabled", "eps", "tol", "max_iter"}},
      {"output", {"directory", "prefix", "diagnostics_every", "snapshot_every", "vtk"}},
      {"run", {"threads"}},
      {"convergence", {"orders", "resolutions"}},
      {"reference", {"cells", "dt", "decimate"}},
  };
  return keys;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  std::vector<T> out;
  std::string tok;
  while (is >> tok) {
    if (tok == ",") continue;
    if (tok.back() == ',') tok.pop_back();
    std::istringstream ts(tok);
    T v{};
    if (!(ts >> v) || !ts.eof()) throw ConfigError("malformed value for '" + key + "': '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty value for '" + key + "'");
  return out;
}

template <class T>
T parse_scalar(const std::string& key, const std::string& text) {
  const auto v = parse_list<T>(key, text);
  if (v.size() != 1) throw ConfigError("expected a single value for '" + key + "'");
  return v[0];
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError("malformed boolean for '" + key + "': '" + text + "'");
}

PrimitiveState parse_state(const std::string& key, const std::string& text) {
  const auto v = parse_list<double>(key, text);
  if (v.size() != 8) throw ConfigError("'" + key + "' needs 8 values: rho vx vy vz Bx By Bz P");
  return {v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}, v[7]};
}

class Section {
 public:
  Section(const pt::ptree& root, const std::string& name) {
    if (auto child = root.get_child_optional(name)) tree_ = *child;
  }
  std::optional<std::string> get(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(key)) return *v;
    return std::nullopt;
  }

 private:
  pt::ptree tree_;
};

CaseConfig make_preset(CaseKind kind, const std::string& name, std::optional<int> cells, std::optional<int> order) {
  CaseConfig base = preset_by_name(name);
  const int n = cells.value_or(base.cells[0]);
  const int p = order.value_or(base.order);
  switch (kind) {
    case CaseKind::Uniform: return preset_uniform(n, p);
    case CaseKind::Vortex: return preset_vortex(n, p);
    case CaseKind::Riemann: {
      CaseConfig c = preset_briowu(n, p);
      if (name == "riemann") c.name = "riemann";
      return c;
    }
    case CaseKind::OrszagTang: return preset_otv(n, p);
    case CaseKind::Blast: return preset_blast(n, p);
  }
  return base;
}

}  // namespace

ConfigFile parse_config(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& err) {
    throw ConfigError(std::string("config syntax: ") + err.what());
  }
  const auto& keys = known_keys();
  for (const auto& [section, tree] : root) {
    auto it = keys.find(section);
    if (it == keys.end()) throw ConfigError("unknown config section [" + section + "]");
    if (tree.empty() && !tree.data().empty()) throw ConfigError("key '" + section + "' outside any section");
    for (const auto& [key, value] : tree) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }

  const Section cs(root, "case"), ph(root, "physics"), me(root, "mesh"), bd(root, "boundary"),
      di(root, "discretization"), tm(root, "time"), fi(root, "filter"), ou(root, "output"), ru(root, "run"),
      cv(root, "convergence"), rf(root, "reference");

  ConfigFile out;
  const std::string name = cs.get("name").value_or("uniform");
  const CaseKind kind = parse_case_kind(name);

  std::optional<std::vector<int>> cells;
  if (auto v = me.get("cells")) {
    cells = parse_list<int>("mesh.cells", *v);
    if (cells->size() > 2) throw ConfigError("mesh.cells takes one or two values");
  }
  std::optional<int> order;
  if (auto v = di.get("order")) order = parse_scalar<int>("discretization.order", *v);

  CaseConfig c = make_preset(kind, name, cells ? std::optional<int>((*cells)[0]) : std::nullopt, order);
  if (cells) {
    c.cells[0] = (*cells)[0];
    c.cells[1] = cells->size() == 2 ? (*cells)[1] : (c.dim == 1 ? 1 : (*cells)[0]);
  }

  if (auto v = cs.get("mu")) c.mu = parse_scalar<double>("case.mu", *v);
  if (auto v = cs.get("left")) c.left = parse_state("case.left", *v);
  if (auto v = cs.get("right")) c.right = parse_state("case.right", *v);
  if (auto v = cs.get("split")) c.split = parse_scalar<double>("case.split", *v);
  if (auto v = cs.get("state")) c.uniform = parse_state("case.state", *v);
  if (auto v = cs.get("blast_radius")) c.blast_radius = parse_scalar<double>("case.blast_radius", *v);
  if (auto v = cs.get("blast_rho")) c.blast_rho = parse_scalar<double>("case.blast_rho", *v);
  if (auto v = cs.get("p_inside")) c.p_inside = parse_scalar<double>("case.p_inside", *v);
  if (auto v = cs.get("p_outside")) c.p_outside = parse_scalar<double>("case.p_outside", *v);
  if (auto v = cs.get("b0")) c.b0 = parse_scalar<double>("case.b0", *v);
  if (kind == CaseKind::Riemann) {
    // Dirichlet states follow the left/right states unless set explicitly.
    if (c.bcs.sides[0].kind == BoundaryKind::Dirichlet) c.bcs.sides[0].dirichlet = c.left;
    if (c.bcs.sides[1].kind == BoundaryKind::Dirichlet) c.bcs.sides[1].dirichlet = c.right;
  }

  if (auto v = ph.get("gamma")) c.gamma = parse_scalar<double>("physics.gamma", *v);

  if (auto v = me.get("dim")) c.dim = parse_scalar<int>("mesh.dim", *v);
  if (auto v = me.get("lower")) {
    const auto l = parse_list<double>("mesh.lower", *v);
    for (std::size_t i = 0; i < std::min<std::size_t>(2, l.size()); ++i) c.lower[i] = l[i];
  }
  if (auto v = me.get("upper")) {
    const auto u = parse_list<double>("mesh.upper", *v);
    for (std::size_t i = 0; i < std::min<std::size_t>(2, u.size()); ++i) c.upper[i] = u[i];
  }

  static const char* side_names[4] = {"x_lower", "x_upper", "y_lower", "y_upper"};
  for (int s = 0; s < 4; ++s) {
    if (auto v = bd.get(side_names[s])) c.bcs.sides[s].kind = parse_boundary_kind(*v);
    const std::string state_key = std::string(side_names[s]) + "_state";
    if (auto v = bd.get(state_key)) c.bcs.sides[s].dirichlet = parse_state("boundary." + state_key, *v);
  }

  if (auto v = di.get("riemann")) {
    try {
      c.riemann = parse_riemann_solver(*v);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
  }
  if (auto v = di.get("mode_order")) {
    if (*v == "max") c.mode_order = ModeOrderConvention::MaxDegree;
    else if (*v == "total") c.mode_order = ModeOrderConvention::TotalDegree;
    else throw ConfigError("discretization.mode_order must be 'max' or 'total'");
  }

  if (auto v = tm.get("dt")) c.dt = parse_scalar<double>("time.dt", *v);
  if (auto v = tm.get("t_end")) c.t_end = parse_scalar<double>("time.t_end", *v);

  if (auto v = fi.get("enabled")) c.filters_enabled = parse_bool("filter.enabled", *v);
  if (auto v = fi.get("eps")) c.filter.eps = parse_scalar<double>("filter.eps", *v);
  if (auto v = fi.get("tol")) c.filter.tol = parse_scalar<double>("filter.tol", *v);
  if (auto v = fi.get("max_iter")) c.filter.max_iter = parse_scalar<int>("filter.max_iter", *v);

  if (auto v = ou.get("directory")) c.output.directory = *v;
  if (auto v = ou.get("prefix")) c.output.prefix = *v;
  if (auto v = ou.get("diagnostics_every")) c.output.diagnostics_every = parse_scalar<int>("output.diagnostics_every", *v);
  if (auto v = ou.get("snapshot_every")) c.output.snapshot_every = parse_scalar<int>("output.snapshot_every", *v);
  if (auto v = ou.get("vtk")) c.output.vtk = parse_bool("output.vtk", *v);

  if (auto v = ru.get("threads")) c.threads = parse_scalar<int>("run.threads", *v);

  if (auto v = cv.get("orders")) out.convergence.orders = parse_list<int>("convergence.orders", *v);
  if (auto v = cv.get("resolutions")) out.convergence.resolutions = parse_list<int>("convergence.resolutions", *v);
  if (auto v = rf.get("cells")) out.reference.cells = parse_scalar<int>("reference.cells", *v);
  if (auto v = rf.get("dt")) out.reference.dt = parse_scalar<double>("reference.dt", *v);
  if (auto v = rf.get("decimate")) out.reference.decimate = parse_scalar<int>("reference.decimate", *v);

  validate(c);
  out.run = c;
  return out;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace efmhd
