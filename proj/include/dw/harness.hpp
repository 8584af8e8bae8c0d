#pragma once

// Experiment orchestration: key=value configs, convergence sweeps with CSV
// rows, and the certification pipeline behind `dw certify`.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dw/mesh.hpp"
#include "dw/quality.hpp"
#include "dw/surfaces.hpp"

namespace dw {

enum class ExperimentKind { Converge, Counterexample, Certify, Energy, VerifyLemmas };

/// Generator families a sweep can refine:
///   icosphere       levels are subdivision levels
///   theta_grid      levels are eps; needs `surface` = graph and `theta`
///   counterexample  levels are m with s = 2 pi / m; eps = 2^-j from `j`
///   protected       levels are eps; augment + restricted Delaunay on `surface`
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Converge;
  std::string generator = "icosphere";
  std::string surface = "sphere:r=1";
  std::vector<double> levels;
  double theta = 0.1;
  int j = 7;              // counterexample eps = 2^-j
  double delta = 0.5;     // protected: protection parameter
  double zeta = 0.0;      // regularity threshold reported in rows
  std::uint64_t seed = 0;
  int trials = 100;
  std::string output;     // CSV path, empty for stdout
  std::string mesh_prefix;  // when set, each level's mesh is saved as <prefix><level>.off

  /// Levels must refine: eps strictly decreasing, subdivision level or m
  /// strictly increasing. Throws InvalidArgument.
  void validate() const;
};

/// Parses flat `key = value` lines ('#' comments). Keys: experiment,
/// generator, surface, levels (comma list), theta, j, delta, zeta, seed,
/// trials, output, mesh_prefix. Throws ParseError with the line number.
ExperimentSpec parse_experiment(std::istream& in);
ExperimentSpec load_experiment(const std::string& path);

struct ConvergenceRow {
  int level = 0;  // position in the sweep
  double eps_or_size = 0.0;
  std::size_t triangles = 0;
  double e = 0.0, e_sn = 0.0, e_ghds = 0.0;
  std::optional<double> e_b;
  double min_angle = 0.0;
  double zeta = 0.0;  // largest zeta the mesh is regular for
  bool delaunay_ok = false;
  double reference = 0.0;
  double rel_error = 0.0;
  std::string status = "ok";  // "ok" or "failed: <message>"
};

/// Column order of the CSV; stable.
inline constexpr const char* kConvergenceHeader =
    "level,eps_or_size,triangles,E,E_SN,E_GHDS,E_B,min_angle,zeta,delaunay_ok,reference,rel_error,status";

namespace harness {

/// Number of worker threads: DW_THREADS when set and positive, otherwise
/// the hardware concurrency.
unsigned worker_threads();

/// Mesh for one sweep entry.
IndexedMesh generate_level(const ExperimentSpec& spec, double level);
/// Continuum Willmore energy the sweep is compared against.
double reference_energy(const ExperimentSpec& spec);

/// One row per level in level order; a failing level yields a row with
/// status "failed: ..." and the sweep continues.
std::vector<ConvergenceRow> run_convergence(const ExperimentSpec& spec);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

struct CertifyOptions {
  std::optional<AnalyticSurface> surface;  // needed for protection
  double zeta = 0.0;
  std::optional<double> protect;  // required margin; skipped when absent
  std::size_t max_violations = 1000;
};

struct CertifyResult {
  QualityReport quality;
  std::optional<ProtectionReport> protection;
  mesh::ManifoldVerdict manifold;
  bool zeta_ok = false;
  bool protection_ok = true;
  /// 0 iff manifold, zeta-regular, Delaunay and (when requested) protected.
  int exit_code = 1;
};

CertifyResult certify(const IndexedMesh& mesh, const CertifyOptions& options);
std::string to_key_value(const CertifyResult& result);

}  // namespace harness
}  // namespace dw
