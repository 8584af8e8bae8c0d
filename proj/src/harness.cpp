#include "dw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "dw/energy.hpp"
#include "dw/generators.hpp"
#include "dw/mesh_io.hpp"

namespace dw {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool refines_by_decreasing(const std::string& generator) {
  return generator == "theta_grid" || generator == "protected";
}

}  // namespace

void ExperimentSpec::validate() const {
  static const char* kGenerators[] = {"icosphere", "theta_grid", "counterexample", "protected"};
  if (std::find_if(std::begin(kGenerators), std::end(kGenerators), [&](const char* g) { return generator == g; }) ==
      std::end(kGenerators))
    throw Error(ErrorKind::InvalidArgument, "unknown generator '" + generator + "'");
  if (kind == ExperimentKind::Converge || kind == ExperimentKind::Counterexample) {
    if (levels.empty()) throw Error(ErrorKind::InvalidArgument, "no levels");
    const bool decreasing = refines_by_decreasing(generator);
    for (std::size_t i = 1; i < levels.size(); ++i) {
      if (decreasing ? !(levels[i] < levels[i - 1]) : !(levels[i] > levels[i - 1]))
        throw Error(ErrorKind::InvalidArgument,
                    decreasing ? "levels must be strictly decreasing in eps" : "levels must be strictly increasing");
    }
  }
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
}

ExperimentSpec parse_experiment(std::istream& in) {
  ExperimentSpec spec;
  std::string raw;
  std::size_t line = 0;
  auto fail = [&](const std::string& what) {
    std::ostringstream s;
    s << "line " << line << ": " << what;
    throw Error(ErrorKind::ParseError, s.str());
  };
  auto number = [&](const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail("expected a number, got '" + v + "'");
    return x;
  };
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (trim(raw).empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key == "experiment") {
      if (value == "converge") spec.kind = ExperimentKind::Converge;
      else if (value == "counterexample") spec.kind = ExperimentKind::Counterexample;
      else if (value == "certify") spec.kind = ExperimentKind::Certify;
      else if (value == "energy") spec.kind = ExperimentKind::Energy;
      else if (value == "verify-lemmas") spec.kind = ExperimentKind::VerifyLemmas;
      else fail("unknown experiment '" + value + "'");
      if (spec.kind == ExperimentKind::Counterexample) spec.generator = "counterexample";
    } else if (key == "generator") {
      spec.generator = value;
    } else if (key == "surface") {
      spec.surface = value;
    } else if (key == "levels") {
      spec.levels.clear();
      std::stringstream ss(value);
      for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        // a/b fractions are convenient for eps
        const auto slash = item.find('/');
        if (slash != std::string::npos) {
          const double den = number(trim(item.substr(slash + 1)));
          if (den == 0.0) fail("zero denominator");
          spec.levels.push_back(number(trim(item.substr(0, slash))) / den);
        } else {
          spec.levels.push_back(number(item));
        }
      }
    } else if (key == "theta") {
      spec.theta = number(value);
    } else if (key == "j") {
      spec.j = static_cast<int>(number(value));
    } else if (key == "delta") {
      spec.delta = number(value);
    } else if (key == "zeta") {
      spec.zeta = number(value);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(number(value));
    } else if (key == "trials") {
      spec.trials = static_cast<int>(number(value));
    } else if (key == "output") {
      spec.output = value;
    } else if (key == "mesh_prefix") {
      spec.mesh_prefix = value;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  return parse_experiment(in);
}

namespace harness {

unsigned worker_threads() {
  if (const char* env = std::getenv("DW_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

IndexedMesh generate_level(const ExperimentSpec& spec, double level) {
  if (spec.generator == "icosphere") return generators::icosphere(static_cast<int>(std::lround(level)));
  if (spec.generator == "counterexample")
    return generators::counterexample_cylinder(CounterexampleSpec::from_indices(static_cast<int>(std::lround(level)), spec.j));
  const AnalyticSurface surface = surfaces::parse_surface(spec.surface);
  if (spec.generator == "theta_grid") {
    if (surface.kind() != SurfaceKind::Graph) throw Error(ErrorKind::InvalidArgument, "theta_grid needs a graph surface");
    ThetaGridSpec g;
    g.field = surface.field();
    g.eps = level;
    g.theta = spec.theta;
    return generators::theta_grid(g);
  }
  if (spec.generator == "protected") {
    const AugmentResult pts = generators::augment_protected_adaptive({}, surface, level, spec.delta);
    RestrictedDelaunayOptions opt;
    opt.protection = std::min(0.5 * spec.delta, pts.c) * level;
    return generators::restricted_delaunay(pts.points, surface, opt);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown generator '" + spec.generator + "'");
}

double reference_energy(const ExperimentSpec& spec) {
  if (spec.generator == "counterexample") return surfaces::willmore_energy(AnalyticSurface::cylinder(1.0, 1.0));
  if (spec.generator == "icosphere") return surfaces::willmore_energy(AnalyticSurface::sphere(1.0));
  return surfaces::willmore_energy(surfaces::parse_surface(spec.surface));
}

std::vector<ConvergenceRow> run_convergence(const ExperimentSpec& spec) {
  spec.validate();
  double reference = 0.0;
  std::string reference_error;
  try {
    reference = reference_energy(spec);
  } catch (const Error& e) {
    reference_error = e.what();
  }

  std::vector<ConvergenceRow> rows(spec.levels.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      ConvergenceRow& row = rows[i];
      row.level = static_cast<int>(i);
      const double level = spec.levels[i];
      row.eps_or_size = spec.generator == "counterexample" ? 2.0 * std::numbers::pi / level : level;
      row.reference = reference;
      try {
        if (!reference_error.empty()) throw Error(ErrorKind::QuadratureNotConverged, reference_error);
        const IndexedMesh mesh = generate_level(spec, level);
        if (!spec.mesh_prefix.empty()) {
          std::ostringstream name;
          name << spec.mesh_prefix << i << ".off";
          io::save_mesh(name.str(), mesh);
        }
        if (spec.generator == "icosphere") row.eps_or_size = mesh::size(mesh);
        row.triangles = mesh.triangles.size();
        const energy::EnergySummary en = energy::all_energies(mesh);
        row.e = en.e;
        row.e_sn = en.e_sn;
        row.e_ghds = en.e_ghds;
        row.e_b = en.e_b;
        const QualityReport q = quality::quality_report(mesh, 1);
        row.min_angle = q.min_angle;
        row.zeta = q.zeta_regular_for;
        row.delaunay_ok = q.delaunay();
        if (reference > 0) row.rel_error = (row.e - reference) / reference;
      } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
      }
    }
  };
  const unsigned n = std::min<unsigned>(worker_threads(), static_cast<unsigned>(rows.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << kConvergenceHeader << '\n';
  out << std::setprecision(12);
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.level << ',' << r.eps_or_size << ',' << r.triangles << ',' << r.e << ',' << r.e_sn << ',' << r.e_ghds
        << ',';
    if (r.e_b) {
      out << *r.e_b;
    } else {
      out << "n/a";
    }
    out << ',' << r.min_angle << ',' << r.zeta << ',' << (r.delaunay_ok ? "true" : "false") << ',' << r.reference
        << ',' << r.rel_error << ',' << status << '\n';
  }
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream s;
  write_convergence_csv(s, rows);
  return s.str();
}

CertifyResult certify(const IndexedMesh& mesh, const CertifyOptions& options) {
  CertifyResult out;
  out.manifold = mesh::check_manifold(mesh);
  out.quality = quality::quality_report(mesh, options.max_violations);
  out.zeta_ok = out.quality.zeta_regular(options.zeta);
  if (options.surface) {
    const double spacing = std::max(quality::min_spacing(mesh.vertices), 1e-9) / 20.0;
    out.protection = quality::protection_report(mesh.vertices, *options.surface, spacing);
  }
  if (options.protect) {
    if (!out.protection) throw Error(ErrorKind::InvalidArgument, "protection check needs a surface");
    out.protection_ok = out.protection->protection_margin >= *options.protect;
  }
  out.exit_code = out.manifold.pass && out.zeta_ok && out.quality.delaunay() && out.protection_ok ? 0 : 1;
  return out;
}

std::string to_key_value(const CertifyResult& r) {
  std::ostringstream s;
  s << "manifold=" << (r.manifold.pass ? "true" : "false") << '\n';
  s << "manifold_violations=" << r.manifold.violations.size() << '\n';
  s << quality::to_key_value(r.quality);
  s << "zeta_ok=" << (r.zeta_ok ? "true" : "false") << '\n';
  if (r.protection) s << quality::to_key_value(*r.protection);
  s << "protection_ok=" << (r.protection_ok ? "true" : "false") << '\n';
  s << "exit_code=" << r.exit_code << '\n';
  return s.str();
}

}  // namespace harness
}  // namespace dw
