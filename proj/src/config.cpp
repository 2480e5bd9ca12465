#include "vvlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "vvlab/errors.hpp"
#include "vvlab/io.hpp"

namespace vvlab {

namespace pt = boost::property_tree;

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::riemann: return "riemann";
    case ProblemKind::smooth: return "smooth";
    case ProblemKind::file: return "file";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected a real number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k > 0) s += ", ";
    s += format_number(v[k]);
  }
  return s;
}

// One config key: reads into and writes from a StudyConfig field.
struct Binding {
  const char* section;
  const char* key;
  std::function<void(StudyConfig&, const std::string&, const std::string&)> read;
  std::function<std::string(const StudyConfig&)> write;
};

Binding real(const char* sec, const char* key, double StudyConfig::*f) {
  return {sec, key, [f](StudyConfig& c, const std::string& k, const std::string& v) { c.*f = parse_real(k, v); },
          [f](const StudyConfig& c) { return format_number(c.*f); }};
}
Binding problem_real(const char* key, double ProblemSpec::*f) {
  return {"problem", key,
          [f](StudyConfig& c, const std::string& k, const std::string& v) { c.problem.*f = parse_real(k, v); },
          [f](const StudyConfig& c) { return format_number(c.problem.*f); }};
}
Binding integer(const char* sec, const char* key, int StudyConfig::*f) {
  return {sec, key, [f](StudyConfig& c, const std::string& k, const std::string& v) { c.*f = parse_int(k, v); },
          [f](const StudyConfig& c) { return std::to_string(c.*f); }};
}
Binding list(const char* sec, const char* key, std::vector<double> StudyConfig::*f) {
  return {sec, key, [f](StudyConfig& c, const std::string& k, const std::string& v) { c.*f = parse_list(k, v); },
          [f](const StudyConfig& c) { return format_list(c.*f); }};
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> b = {
      real("study", "gamma", &StudyConfig::gamma),
      {"study", "output_dir",
       [](StudyConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); },
       [](const StudyConfig& c) { return c.output_dir; }},
      {"study", "audit",
       [](StudyConfig& c, const std::string& k, const std::string& v) { c.study_audit = parse_bool(k, v); },
       [](const StudyConfig& c) { return std::string(c.study_audit ? "true" : "false"); }},
      {"problem", "kind",
       [](StudyConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "riemann") c.problem.kind = ProblemKind::riemann;
         else if (t == "smooth") c.problem.kind = ProblemKind::smooth;
         else if (t == "file") c.problem.kind = ProblemKind::file;
         else throw ConfigError(k + ": expected riemann, smooth or file, got '" + v + "'");
       },
       [](const StudyConfig& c) { return std::string(to_string(c.problem.kind)); }},
      problem_real("left_rho", &ProblemSpec::left_rho),
      problem_real("left_u", &ProblemSpec::left_u),
      problem_real("right_rho", &ProblemSpec::right_rho),
      problem_real("right_u", &ProblemSpec::right_u),
      problem_real("L0", &ProblemSpec::L0),
      {"problem", "profile",
       [](StudyConfig& c, const std::string&, const std::string& v) { c.problem.profile = trim(v); },
       [](const StudyConfig& c) { return c.problem.profile; }},
      {"problem", "path",
       [](StudyConfig& c, const std::string&, const std::string& v) { c.problem.path = trim(v); },
       [](const StudyConfig& c) { return c.problem.path; }},
      list("ladder", "epsilons", &StudyConfig::epsilons),
      list("ladder", "cfls", &StudyConfig::rung_cfls),
      real("grid", "x_min", &StudyConfig::x_min),
      real("grid", "x_max", &StudyConfig::x_max),
      integer("grid", "n_cells", &StudyConfig::n_cells),
      real("times", "t_end", &StudyConfig::t_end),
      integer("times", "n_snapshots", &StudyConfig::n_snapshots),
      real("window", "k_min", &StudyConfig::k_min),
      real("window", "k_max", &StudyConfig::k_max),
      real("solver", "cfl", &StudyConfig::cfl),
      real("solver", "visc_safety", &StudyConfig::visc_safety),
      real("solver", "mollifier_factor", &StudyConfig::mollifier_factor),
      real("solver", "epsilon", &StudyConfig::epsilon),
      real("reference", "cfl", &StudyConfig::euler_cfl),
      integer("reference", "refine", &StudyConfig::reference_refine),
      real("commutator", "s1", &StudyConfig::s1),
      real("commutator", "s2", &StudyConfig::s2),
      real("commutator", "spline_width", &StudyConfig::spline_width),
  };
  return b;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void StudyConfig::validate_single() const {
  require(std::isfinite(gamma) && gamma > 1.0, "gamma must be > 1 (got " + format_number(gamma) + ")");
  require(!output_dir.empty(), "output_dir must not be empty");
  require(problem.L0 > 0.0, "problem.L0 must be > 0");
  require(problem.left_rho > 0.0 && problem.right_rho > 0.0,
          "problem far-field densities must be > 0");
  require(std::isfinite(problem.left_u) && std::isfinite(problem.right_u),
          "problem far-field velocities must be finite");
  if (problem.kind == ProblemKind::smooth) {
    require(problem.profile == "reference" || problem.profile == "bump",
            "problem.profile must be 'reference' or 'bump'");
  }
  if (problem.kind == ProblemKind::file) require(!problem.path.empty(), "problem.path must be set for kind = file");
  require(x_max > x_min, "grid.x_max must exceed grid.x_min");
  require(n_cells >= 8, "grid.n_cells must be >= 8");
  require(t_end > 0.0, "times.t_end must be > 0");
  require(n_snapshots >= 2, "times.n_snapshots must be >= 2");
  require(k_max > k_min, "window.k_max must exceed window.k_min");
  require(k_min >= x_min && k_max <= x_max, "window K must lie inside the grid");
  require(mollifier_factor >= 0.0, "solver.mollifier_factor must be >= 0");
  require(epsilon > 0.0, "solver.epsilon must be > 0");
  require(euler_cfl > 0.0 && euler_cfl < 1.0, "reference.cfl must lie in (0, 1)");
  require(reference_refine >= 1, "reference.refine must be >= 1");
  require(spline_width > 0.0, "commutator.spline_width must be > 0");
  ns_config(epsilon).validate();
}

void StudyConfig::validate() const {
  validate_single();
  require(epsilons.size() >= 3, "ladder must have at least 3 rungs (got " + std::to_string(epsilons.size()) + ")");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    require(epsilons[k] > 0.0, "ladder epsilons must be > 0");
    if (k > 0) require(epsilons[k] < epsilons[k - 1], "ladder must be strictly decreasing");
  }
  require(rung_cfls.empty() || rung_cfls.size() == epsilons.size(),
          "ladder.cfls must be empty or have one entry per rung");
}

ReferenceProfile StudyConfig::reference() const {
  return ReferenceProfile(problem.left_rho, problem.left_u, problem.right_rho, problem.right_u, problem.L0);
}

NSConfig StudyConfig::ns_config(double eps, int rung) const {
  NSConfig c;
  c.epsilon = eps;
  c.cfl = (rung >= 0 && static_cast<std::size_t>(rung) < rung_cfls.size()) ? rung_cfls[rung] : cfl;
  c.visc_safety = visc_safety;
  c.t_end = t_end;
  c.snapshot_times = snapshot_times();
  c.mollifier_width = mollifier_factor * eps;
  return c;
}

StudyConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  std::set<std::pair<std::string, std::string>> known;
  for (const Binding& b : bindings()) known.insert({b.section, b.key});
  for (const auto& [section, node] : tree) {
    if (node.empty() && !node.data().empty()) {
      throw ConfigError("config key '" + section + "' must be inside a section");
    }
    for (const auto& [key, value] : node) {
      if (!known.contains({section, key})) throw ConfigError("unknown config key " + section + "." + key);
    }
  }
  StudyConfig cfg;
  for (const Binding& b : bindings()) {
    const auto v = tree.get_optional<std::string>(pt::ptree::path_type(std::string(b.section) + "." + b.key));
    if (v) b.read(cfg, std::string(b.section) + "." + b.key, *v);
  }
  return cfg;
}

StudyConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

std::string serialize_config(const StudyConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const Binding& b : bindings()) {
    if (section != b.section) {
      if (!section.empty()) os << '\n';
      section = b.section;
      os << '[' << section << "]\n";
    }
    os << b.key << " = " << b.write(cfg) << '\n';
  }
  return os.str();
}

namespace {

InitialData file_initial_data(const StudyConfig& cfg, const Grid1D& grid) {
  std::string text;
  try {
    text = read_text_file(cfg.problem.path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,rho,u") {
    throw ConfigError(cfg.problem.path + ": expected header 'x,rho,u'");
  }
  std::vector<double> xs, rs, us;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto row = parse_list(cfg.problem.path, line);
    if (row.size() != 3) throw ConfigError(cfg.problem.path + ": each row needs x,rho,u");
    if (!xs.empty() && !(row[0] > xs.back())) throw ConfigError(cfg.problem.path + ": x must increase");
    xs.push_back(row[0]);
    rs.push_back(row[1]);
    us.push_back(row[2]);
  }
  if (xs.size() < 2) throw ConfigError(cfg.problem.path + ": needs at least two rows");
  const ReferenceProfile ref = cfg.reference();
  InitialData d{grid, std::vector<double>(grid.n_cells()), std::vector<double>(grid.n_cells()), DataStage::raw};
  for (int i = 0; i < grid.n_cells(); ++i) {
    const double x = grid.x(i);
    if (x <= xs.front() || x >= xs.back()) {
      // Outside the file the data are the far-field states.
      d.rho0[i] = ref.rho_bar(x);
      d.u0[i] = ref.u_bar(x);
      continue;
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    d.rho0[i] = (1 - w) * rs[j - 1] + w * rs[j];
    d.u0[i] = (1 - w) * us[j - 1] + w * us[j];
  }
  return d;
}

}  // namespace

InitialData build_initial_data(const StudyConfig& cfg, const Grid1D& grid) {
  const ReferenceProfile ref = cfg.reference();
  switch (cfg.problem.kind) {
    case ProblemKind::riemann:
      return riemann_initial_data(grid, ref.left_state(), ref.right_state(), 0.0);
    case ProblemKind::smooth: {
      InitialData d = profile_initial_data(grid, ref);
      if (cfg.problem.profile == "bump") {
        const double h = 0.5 * ref.L0();
        for (int i = 0; i < grid.n_cells(); ++i) d.rho0[i] += 0.2 * std::exp(1.0) * smooth_bump(grid.x(i) / h);
      }
      return d;
    }
    case ProblemKind::file:
      return file_initial_data(cfg, grid);
  }
  throw ConfigError("unknown problem kind");
}

}  // namespace vvlab
