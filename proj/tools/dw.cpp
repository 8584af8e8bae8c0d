// dw: generate meshes, evaluate energies, certify quality, run sweeps and
// the randomized lemma checks. Exit codes: 0 success, 1 check failure,
// 2 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dw/energy.hpp"
#include "dw/generators.hpp"
#include "dw/harness.hpp"
#include "dw/lemmas.hpp"
#include "dw/mesh_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

void write_sidecar(const std::string& mesh_path, const nlohmann::json& params, const dw::IndexedMesh& mesh) {
  nlohmann::json j = params;
  j["vertices"] = mesh.vertices.size();
  j["triangles"] = mesh.triangles.size();
  std::ofstream out(mesh_path + ".json");
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Willmore energy toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Build a mesh and write it as OFF with a JSON sidecar");
  std::string kind, out_path, surface_text = "sphere:r=1";
  int level = 3, m = 8, j = 7;
  double eps = 0.125, theta = 0.1, delta = 0.5;
  bool flat = false;
  gen->add_option("kind", kind, "icosphere | theta_grid | counterexample | protected")
      ->required()
      ->check(CLI::IsMember({"icosphere", "theta_grid", "counterexample", "protected"}));
  gen->add_option("-o,--output", out_path, "OFF output path")->required();
  gen->add_option("--level", level, "icosphere subdivision level");
  gen->add_option("--surface", surface_text, "surface description, e.g. graph:h=quadratic,a=0.05,b=0,c=-0.05,U=[0,1]x[0,1]");
  gen->add_option("--eps", eps, "grid scale / protected spacing");
  gen->add_option("--theta", theta, "skew of the theta-grid");
  gen->add_option("--m", m, "counterexample: s = 2 pi / m");
  gen->add_option("--j", j, "counterexample: eps = 2^-j");
  gen->add_flag("--flat", flat, "counterexample: keep the strip unrolled in the plane");
  gen->add_option("--delta", delta, "protected: protection parameter");

  // energy
  auto* en = app.add_subcommand("energy", "Discrete energies of a mesh");
  std::string mesh_path, breakdown_path;
  en->add_option("mesh", mesh_path, "OFF or OBJ mesh")->required();
  en->add_option("--breakdown", breakdown_path, "per-edge CSV");

  // certify
  auto* cert = app.add_subcommand("certify", "Regularity, Delaunay, manifold and protection checks");
  double zeta = 0.0, protect = -1.0;
  std::string violations_path;
  cert->add_option("mesh", mesh_path, "OFF or OBJ mesh")->required();
  cert->add_option("--surface", surface_text, "surface the vertices sample");
  cert->add_option("--zeta", zeta, "required regularity");
  cert->add_option("--protect", protect, "required protection margin");
  cert->add_option("--violations", violations_path, "Delaunay violations CSV");

  // converge
  auto* conv = app.add_subcommand("converge", "Refinement sweep from a key=value config");
  std::string config_path;
  conv->add_option("--config", config_path, "config file")->required();
  conv->add_option("-o,--output", out_path, "CSV output (overrides the config)");

  // verify-lemmas
  auto* ver = app.add_subcommand("verify-lemmas", "Randomized checks of the traversal identities");
  std::uint64_t seed = 0;
  int trials = 100;
  double rhs_scale = 1.0;
  ver->add_option("--seed", seed, "RNG seed");
  ver->add_option("--trials", trials, "trials per suite");
  ver->add_option("--rhs-scale", rhs_scale, "scale every bound (below 1 injects a violation)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*gen) {
      dw::IndexedMesh mesh;
      nlohmann::json params{{"kind", kind}};
      if (kind == "icosphere") {
        mesh = dw::generators::icosphere(level);
        params["level"] = level;
      } else if (kind == "theta_grid") {
        dw::ExperimentSpec spec;
        spec.generator = "theta_grid";
        spec.surface = surface_text;
        spec.theta = theta;
        mesh = dw::harness::generate_level(spec, eps);
        params["surface"] = surface_text;
        params["eps"] = eps;
        params["theta"] = theta;
      } else if (kind == "counterexample") {
        const auto spec = dw::CounterexampleSpec::from_indices(m, j, flat);
        mesh = dw::generators::counterexample_cylinder(spec);
        params["m"] = m;
        params["j"] = j;
        params["s"] = spec.s;
        params["eps"] = spec.eps;
        params["flat"] = flat;
      } else {
        dw::ExperimentSpec spec;
        spec.generator = "protected";
        spec.surface = surface_text;
        spec.delta = delta;
        mesh = dw::harness::generate_level(spec, eps);
        params["surface"] = surface_text;
        params["eps"] = eps;
        params["delta"] = delta;
      }
      dw::io::save_mesh(out_path, mesh);
      write_sidecar(out_path, params, mesh);
      std::cout << "vertices=" << mesh.vertices.size() << "\ntriangles=" << mesh.triangles.size() << '\n';
      return kOk;
    }

    if (*en) {
      const dw::IndexedMesh mesh = dw::io::load_mesh(mesh_path, true);
      const dw::EdgeAdjacency adj = dw::mesh::build_adjacency(mesh);
      const dw::EnergyBreakdown b = dw::energy::bending_energy(mesh, adj);
      std::cout << "E=" << fmt(b.total) << '\n'
                << "E_SN=" << fmt(dw::energy::seung_nelson_energy(mesh, adj)) << '\n'
                << "E_GHDS=" << fmt(dw::energy::ghds_energy(mesh, adj)) << '\n';
      const auto eb = dw::energy::bobenko_energy(mesh, adj);
      std::cout << "E_B=" << (eb ? fmt(*eb) : std::string("n/a")) << '\n';
      if (!breakdown_path.empty()) {
        std::ofstream out(breakdown_path);
        if (!out) throw dw::Error(dw::ErrorKind::ParseError, "cannot write " + breakdown_path);
        dw::energy::write_energy_csv(out, b);
      }
      return kOk;
    }

    if (*cert) {
      const dw::IndexedMesh mesh = dw::io::load_mesh(mesh_path);
      dw::harness::CertifyOptions opt;
      opt.zeta = zeta;
      if (cert->count("--surface") > 0) opt.surface = dw::surfaces::parse_surface(surface_text);
      if (protect >= 0) {
        if (!opt.surface) throw dw::Error(dw::ErrorKind::InvalidArgument, "--protect needs --surface");
        opt.protect = protect;
      }
      const auto result = dw::harness::certify(mesh, opt);
      std::cout << dw::harness::to_key_value(result);
      if (!violations_path.empty()) {
        std::ofstream out(violations_path);
        dw::quality::write_violations_csv(out, result.quality);
      } else {
        const std::size_t shown = std::min<std::size_t>(result.quality.delaunay_violations.size(), 10);
        for (std::size_t i = 0; i < shown; ++i) {
          const auto& v = result.quality.delaunay_violations[i];
          std::cout << "violation triangle=" << v.triangle << " vertex=" << v.vertex << " depth=" << fmt(v.depth) << '\n';
        }
      }
      return result.exit_code == 0 ? kOk : kCheckFailed;
    }

    if (*conv) {
      dw::ExperimentSpec spec = dw::load_experiment(config_path);
      if (!out_path.empty()) spec.output = out_path;
      const auto rows = dw::harness::run_convergence(spec);
      if (spec.output.empty()) {
        dw::harness::write_convergence_csv(std::cout, rows);
      } else {
        std::ofstream out(spec.output);
        if (!out) throw dw::Error(dw::ErrorKind::ParseError, "cannot write " + spec.output);
        dw::harness::write_convergence_csv(out, rows);
      }
      const bool failed = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.status != "ok"; });
      return failed ? kCheckFailed : kOk;
    }

    if (*ver) {
      dw::LemmaOptions opt;
      opt.trials = trials;
      opt.rhs_scale = rhs_scale;
      const dw::LemmaReport report = dw::lemmas::verify_lemmas(seed, opt);
      for (const auto& s : report.suites)
        std::cout << s.name << ": " << s.passed << "/" << s.trials << " passed, worst " << fmt(s.worst) << " ("
                  << s.metric << ")\n";
      std::cout << "seed=" << seed << " result=" << (report.pass() ? "pass" : "fail") << '\n';
      return report.pass() ? kOk : kCheckFailed;
    }
  } catch (const dw::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
