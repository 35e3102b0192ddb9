#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fbms/domain_json.hpp"
#include "fbms/gap.hpp"
#include "fbms/identities.hpp"
#include "fbms/obj_io.hpp"
#include "fbms/reference.hpp"
#include "fbms/report_json.hpp"
#include "fbms/solver.hpp"

namespace fbms::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string out = ".";
  std::uint64_t seed = 0;
  int levels = 1;
  std::optional<double> tol_h;
  std::optional<double> tol_angle;
  std::optional<int> max_iters;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "Seed for any internal randomness")->capture_default_str();
  app->add_option("--levels", c.levels, "Refinement levels")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--tol-h", c.tol_h, "Tolerance on max |H| * diameter");
  app->add_option("--tol-angle", c.tol_angle, "Tolerance on max |<N, Nbar>|");
  app->add_option("--max-iters", c.max_iters, "Solver iteration cap");
}

json common_json(const Common& c) {
  json j = {{"seed", c.seed}, {"levels", c.levels}};
  if (c.tol_h) j["tol_h"] = *c.tol_h;
  if (c.tol_angle) j["tol_angle"] = *c.tol_angle;
  if (c.max_iters) j["max_iters"] = *c.max_iters;
  return j;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot write " + path.string());
  f << doc.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot write " + path.string());
  body(f);
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

EllipsoidSpec ellipsoid_of(const LevelSetDomain& domain) {
  if (const auto* e = domain.as<EllipsoidSpec>()) return *e;
  if (domain.as<Ball>()) return {1.0, 1.0};
  fail(ErrorKind::InvalidArgument, "this check needs an ellipsoid (or ball) domain, got " + domain.name());
}

void require_ball(const LevelSetDomain& domain) {
  if (!domain.as<Ball>()) fail(ErrorKind::InvalidArgument, "this check needs the unit ball domain, got " + domain.name());
}

GapOptions gap_options(const Common& c) {
  GapOptions o;
  if (c.tol_h) o.minimality_threshold = 10.0 * *c.tol_h;
  if (c.tol_angle) o.angle_threshold = 10.0 * *c.tol_angle;
  return o;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

struct Run {
  RunManifest manifest;
  std::ostream& out;
  std::ostream& err;
};

int do_classify(Run& run, const Common& c, const std::string& domain_path, int samples) {
  run.manifest.inputs = {domain_path};
  const LevelSetDomain domain = load_domain(domain_path);
  run.manifest.domain = domain_to_json(domain);
  const fs::path dir = prepare_out(c.out);
  const json verdict = verdict_to_json(classify(domain));
  write_json(dir / "verdict.json", verdict);
  if (domain.as<QuadricSpec>() || domain.as<ProfileCurve>() || domain.as<Ball>()) {
    SignatureOptions so;
    so.samples = samples;
    write_json(dir / "signature.json", to_json(signature_scan(domain, so)));
  }
  run.out << verdict.dump(2) << '\n';
  return Ok;
}

int do_solve(Run& run, const Common& c, const std::string& mesh_path, const std::string& domain_path,
             SolveConfig config) {
  run.manifest.inputs = {mesh_path, domain_path};
  const LevelSetDomain domain = load_domain(domain_path);
  run.manifest.domain = domain_to_json(domain);
  const TriMesh initial = load_obj(mesh_path);
  if (c.tol_h) config.tol_H = *c.tol_h;
  if (c.tol_angle) config.tol_angle = *c.tol_angle;
  if (c.max_iters) config.max_iters = *c.max_iters;
  const fs::path dir = prepare_out(c.out);

  auto [final_mesh, report] = solve_free_boundary(initial, domain, config);
  save_obj(final_mesh, dir / "final.obj");
  write_json(dir / "report.json", to_json(report));
  run.out << "iterations " << report.iterations << ", area " << fmt("%.10g", report.final_area) << ", residual_H "
          << fmt("%.3e", report.residual_H) << ", residual_angle " << fmt("%.3e", report.residual_angle) << '\n';
  if (!report.converged) {
    run.err << "not converged: residuals above tolerance after " << report.iterations << " iterations\n";
    return HypothesisOrConvergence;
  }
  run.out << "converged\n";
  return Ok;
}

int do_verify(Run& run, const Common& c, const std::string& mesh_path, const std::string& domain_path,
              const std::string& tag, const std::string& phi, int degree, const std::string& reference) {
  run.manifest.inputs = {mesh_path, domain_path};
  const LevelSetDomain domain = load_domain(domain_path);
  run.manifest.domain = domain_to_json(domain);
  const TriMesh mesh = load_obj(mesh_path);
  const IdentityKind kind = parse_identity(tag, parse_test_function(phi), degree);

  IdentityOptions options;
  options.levels = c.levels;
  if (c.tol_h) options.minimality_threshold = 10.0 * *c.tol_h;
  if (!reference.empty()) {
    run.manifest.inputs.push_back(reference);
    std::ifstream f(reference);
    if (!f) fail(ErrorKind::Io, "cannot open " + reference);
    json doc;
    try {
      doc = json::parse(f);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::ParseError, reference + ": " + e.what());
    }
    const ReferenceSurface surface = reference_surface(reference_spec_from_json(doc));
    const int resolution = doc.value("resolution", 0);
    if (resolution < 8) fail(ErrorKind::ParseError, reference + ": missing or too small \"resolution\"");
    options.refiner = [surface, resolution](const TriMesh&, int level) { return surface.sample(resolution << level); };
  }
  const fs::path dir = prepare_out(c.out);
  const IdentityReport report = check_identity(kind, mesh, domain, options);
  write_json(dir / "report.json", to_json(report));
  write_text(dir / "identity.csv", [&](std::ostream& o) { write_identity_csv(report, o); });

  run.out << kind.name() << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%5s %10s %12s %16s %16s %12s %12s\n", "level", "triangles", "h", "lhs", "rhs",
                "residual", "relative");
  run.out << line;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const IdentityLevel& l = report.levels[i];
    std::snprintf(line, sizeof line, "%5zu %10d %12.5e %16.10g %16.10g %12.4e %12.4e\n", i, l.triangles, l.h, l.lhs,
                  l.rhs, l.residual, l.relative_residual);
    run.out << line;
  }
  if (report.estimated_order) run.out << "estimated order " << fmt("%.3f", *report.estimated_order) << '\n';
  if (report.exact) run.out << "exact to round-off at every level\n";
  if (!report.hypothesis_met) {
    run.err << "hypothesis unmet: " << report.hypothesis_message << '\n';
    return HypothesisOrConvergence;
  }
  return Ok;
}

int do_gap(Run& run, const Common& c, const std::string& mesh_path, const std::string& domain_path,
           const std::string& check, bool csv) {
  run.manifest.inputs = {mesh_path, domain_path};
  const LevelSetDomain domain = load_domain(domain_path);
  run.manifest.domain = domain_to_json(domain);
  const TriMesh mesh = load_obj(mesh_path);
  const GapOptions options = gap_options(c);
  const fs::path dir = prepare_out(c.out);

  GapReport report;
  try {
    const DiscreteGeometry geom = compute_geometry(mesh);
    if (check == "ellipsoid-gap") {
      report = gap_ellipsoid(mesh, geom, ellipsoid_of(domain), options);
    } else if (check == "ball-gap") {
      require_ball(domain);
      report = gap_ball(mesh, geom, options);
    } else if (check == "jacobi") {
      require_ball(domain);
      report = jacobi_residual(mesh, geom);
    } else if (check == "boundary-principal") {
      require_ball(domain);
      report = boundary_principal(mesh, geom, domain, options);
    } else if (check == "boundary-convexity") {
      report = boundary_convexity(mesh, geom, ellipsoid_of(domain), options);
    } else {
      fail(ErrorKind::InvalidArgument, "unknown check \"" + check + "\"");
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::HypothesisUnmet) throw;
    write_json(dir / "report.json", {{"kind", check}, {"hypothesis_unmet", e.what()}});
    run.err << "hypothesis unmet: " << e.what() << '\n';
    return HypothesisOrConvergence;
  }
  write_json(dir / "report.json", to_json(report));
  if (csv) write_text(dir / "gap_values.csv", [&](std::ostream& o) { write_gap_csv(report, o); });

  const bool is_min = report.kind == GapKind::EllipsoidBoundaryConvexity;
  run.out << to_string(report.kind) << ": " << (is_min ? "min " : "max ") << fmt("%.6g", report.max_value)
          << (is_min ? ", needs >= " : ", bound ") << fmt("%.6g", report.bound) << ", witness vertex " << report.witness
          << '\n';
  for (const auto& [key, value] : report.metrics) run.out << "  " << key << " = " << fmt("%.6g", value) << '\n';
  for (const auto& [key, value] : report.labels) run.out << "  " << key << " = " << value << '\n';
  for (const LoopRecord& l : report.per_loop) {
    run.out << "  loop " << l.loop << ": defect " << fmt("%.3e", l.dependence_defect) << ", lambda "
            << fmt("%.6g", l.lambda_mean) << " (spread " << fmt("%.3e", l.lambda_spread) << "), lem1 "
            << fmt("%.3e", l.lem1_error) << ", H residual " << fmt("%.3e", l.mean_curvature_residual) << '\n';
  }
  if (!report.hypothesis_satisfied) {
    run.err << "hypothesis not satisfied: " << (is_min ? "min " : "max ") << fmt("%.6g", report.max_value)
            << (is_min ? " below " : " exceeds bound ") << fmt("%.6g", report.bound) << '\n';
    return HypothesisOrConvergence;
  }
  return Ok;
}

int do_reference(Run& run, const Common& c, const std::string& kind, int resolution, const json& params,
                 double noise) {
  json doc = params;
  doc["kind"] = kind;
  const ReferenceSurface surface = reference_surface(reference_spec_from_json(doc));
  TriMesh mesh = surface.sample(resolution);
  if (noise > 0.0) {
    if (surface.spec.kind != ReferenceKind::EquatorialDisk || surface.spec.radius != 1.0) {
      fail(ErrorKind::InvalidArgument, "--noise applies to the unit equatorial disk only");
    }
    mesh = perturbed_disk(resolution, noise, c.seed);
  }
  run.manifest.domain = domain_to_json(surface.domain());
  const fs::path dir = prepare_out(c.out);
  save_obj(mesh, dir / "surface.obj");
  json sidecar = reference_sidecar(surface, resolution);
  if (noise > 0.0) {
    sidecar["noise"] = noise;
    sidecar["seed"] = c.seed;
  }
  write_json(dir / "surface.json", sidecar);
  write_json(dir / "domain.json", domain_to_json(surface.domain()));
  run.out << surface.name() << ": " << mesh.num_vertices() << " vertices, " << mesh.num_triangles()
          << " triangles, exact area " << fmt("%.12g", surface.exact_area) << '\n';
  if (surface.catenoid) {
    run.out << "s0 = " << fmt("%.16g", surface.catenoid->s0) << ", c = " << fmt("%.16g", surface.catenoid->c) << '\n';
  }
  return Ok;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::QueryOutsideProfileInterval:
    case ErrorKind::ParseError:
    case ErrorKind::NonTriangularFace:
    case ErrorKind::Io: return InputError;
    case ErrorKind::HypothesisUnmet: return HypothesisOrConvergence;
    case ErrorKind::DegenerateGradient:
    case ErrorKind::ProjectionDiverged:
    case ErrorKind::InsufficientNeighborhood:
    case ErrorKind::TangentProjectionDegenerate:
    case ErrorKind::MeshDegenerated: return NumericalFailure;
  }
  return NumericalFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free-boundary minimal surfaces in level-set domains"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  Common common;

  auto* classify_cmd = app.add_subcommand("classify", "Classify a domain and scan sign conditions of dF/dv");
  std::string domain_path, mesh_path;
  int samples = 10000;
  classify_cmd->add_option("domain", domain_path, "Domain spec (JSON)")->required();
  classify_cmd->add_option("--samples", samples, "Boundary samples of the sign scan")->capture_default_str();
  add_common(classify_cmd, common);

  auto* solve_cmd = app.add_subcommand("solve", "Relax a mesh to a free-boundary minimal surface");
  SolveConfig config;
  double step = 0.0;
  bool no_damping = false;
  solve_cmd->add_option("mesh", mesh_path, "Initial mesh (OBJ)")->required();
  solve_cmd->add_option("domain", domain_path, "Domain spec (JSON)")->required();
  solve_cmd->add_option("--step", step, "Initial time step (default 0.1 h^2)");
  solve_cmd->add_option("--min-iters", config.min_iters, "Iterations run regardless of convergence");
  solve_cmd->add_option("--smoothing", config.tangential_smoothing, "Tangential smoothing weight")->capture_default_str();
  solve_cmd->add_flag("--no-damping", no_damping, "Accept steps that increase the area");
  add_common(solve_cmd, common);

  auto* verify_cmd = app.add_subcommand("verify", "Check an integral identity with a refinement study");
  std::string identity, phi = "1", reference;
  int degree = 2;
  verify_cmd->add_option("mesh", mesh_path, "Surface (OBJ)")->required();
  verify_cmd->add_option("domain", domain_path, "Domain spec (JSON)")->required();
  verify_cmd->add_option("--identity", identity,
                         "fundamental | minkowski | homogeneous | quadric-laplacian | quadric-combined | "
                         "rotational-combined | ball-half")
      ->required();
  verify_cmd->add_option("--phi", phi, "Test function: 1, x1, x2, x3, |x|^2, x1x2")->capture_default_str();
  verify_cmd->add_option("--degree", degree, "Homogeneity degree")->capture_default_str();
  verify_cmd->add_option("--reference", reference,
                         "Reference sidecar JSON; refinement levels then resample the exact surface");
  add_common(verify_cmd, common);

  auto* gap_cmd = app.add_subcommand("gap", "Evaluate a gap predicate or boundary analysis");
  std::string check;
  bool csv = false;
  gap_cmd->add_option("mesh", mesh_path, "Surface (OBJ)")->required();
  gap_cmd->add_option("domain", domain_path, "Domain spec (JSON)")->required();
  gap_cmd->add_option("--check", check,
                      "ellipsoid-gap | ball-gap | jacobi | boundary-principal | boundary-convexity")
      ->required();
  gap_cmd->add_flag("--csv", csv, "Also write per-vertex values to gap_values.csv");
  add_common(gap_cmd, common);

  auto* reference_cmd = app.add_subcommand("reference", "Write a reference surface mesh and its sidecar");
  std::string kind;
  int resolution = 32;
  double radius = 1.0, a = 2.0, b = 1.0, azimuth = 0.0, height = 0.0, noise = 0.0;
  reference_cmd
      ->add_option("--kind", kind,
                   "equatorial-disk | critical-catenoid | ellipsoid-disk-equatorial | ellipsoid-disk-meridian | "
                   "cylinder-disk")
      ->required();
  reference_cmd->add_option("--resolution", resolution, "Rings (disks) or segments (catenoid)")->capture_default_str();
  reference_cmd->add_option("--radius", radius, "Ball radius for equatorial-disk")->capture_default_str();
  reference_cmd->add_option("--a", a, "Ellipsoid equatorial semi-axis")->capture_default_str();
  reference_cmd->add_option("--b", b, "Ellipsoid polar semi-axis")->capture_default_str();
  reference_cmd->add_option("--azimuth", azimuth, "Meridian plane azimuth")->capture_default_str();
  reference_cmd->add_option("--height", height, "Plane height for cylinder-disk")->capture_default_str();
  reference_cmd->add_option("--noise", noise, "Odd x3 noise amplitude (unit equatorial disk; uses --seed)");
  add_common(reference_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : InputError;
  }

  const auto start = std::chrono::steady_clock::now();
  Run run{RunManifest{}, out, err};
  CLI::App* sub = app.get_subcommands().front();
  run.manifest.command = sub->get_name();
  run.manifest.output_dir = common.out;
  run.manifest.config = common_json(common);

  int code = Ok;
  try {
    if (sub == classify_cmd) {
      run.manifest.config["samples"] = samples;
      code = do_classify(run, common, domain_path, samples);
    } else if (sub == solve_cmd) {
      if (solve_cmd->count("--step")) config.step = step;
      config.damping = !no_damping;
      if (config.step) run.manifest.config["step"] = *config.step;
      run.manifest.config["min_iters"] = config.min_iters;
      run.manifest.config["smoothing"] = config.tangential_smoothing;
      run.manifest.config["damping"] = config.damping;
      code = do_solve(run, common, mesh_path, domain_path, config);
    } else if (sub == verify_cmd) {
      run.manifest.config["identity"] = identity;
      run.manifest.config["phi"] = phi;
      run.manifest.config["degree"] = degree;
      code = do_verify(run, common, mesh_path, domain_path, identity, phi, degree, reference);
    } else if (sub == gap_cmd) {
      run.manifest.config["check"] = check;
      code = do_gap(run, common, mesh_path, domain_path, check, csv);
    } else {
      run.manifest.config["kind"] = kind;
      run.manifest.config["resolution"] = resolution;
      json params = {{"radius", radius}, {"a", a}, {"b", b}, {"azimuth", azimuth}, {"height", height}};
      run.manifest.config.update(params);
      if (noise > 0.0) run.manifest.config["noise"] = noise;
      code = do_reference(run, common, kind, resolution, params, noise);
    }
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    code = NumericalFailure;
    err << "error: " << e.what() << '\n';
  }

  run.manifest.exit_code = code;
  run.manifest.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_json(prepare_out(common.out) / "manifest.json", to_json(run.manifest));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (code == Ok) code = InputError;
  }
  return code;
}

}  // namespace fbms::cli
