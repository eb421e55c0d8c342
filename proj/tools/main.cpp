// panto: analysis and weight optimization of cable-stiffened scissor
// (pantograph) deployable structures.
//
// Exit codes: 0 success, 2 file/I-O error, 3 parse or schema error,
// 4 model validation error, 5 solver failure, 6 invalid configuration.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "panto/document.hpp"
#include "panto/errors.hpp"
#include "panto/geometry.hpp"
#include "panto/model.hpp"
#include "panto/optimizer.hpp"
#include "panto/report.hpp"
#include "panto/solver.hpp"

namespace {

constexpr int kExitIo = 2;
constexpr int kExitParse = 3;
constexpr int kExitValidation = 4;
constexpr int kExitSolver = 5;
constexpr int kExitConfig = 6;

struct CommonFlags {
  bool paper_signs = false;
  bool full_precision = false;
  std::string out_dir = ".";
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw panto::Error("cannot write '" + path.string() + "'");
  }
  out << content;
}

panto::Model load_model(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw panto::Error("no such file: " + path);
  }
  const panto::ModelDocument doc = panto::load_model_document(path);
  return panto::build_model_or_throw(doc);
}

void print_table(std::ostream& out, const panto::ResultTables& tables,
                 const panto::ReportOptions& options, bool planar) {
  const auto f3 = [&](double v) {
    return options.full_precision ? panto::format_full(v) : panto::format_double(v, 3);
  };
  const auto f1 = [&](double v) {
    return options.full_precision ? panto::format_full(v) : panto::format_double(v, 1);
  };

  out << "displacements [mm]\n  node        dx        dy" << (planar ? "" : "        dz")
      << "\n";
  for (const auto& r : tables.displacements) {
    out << "  " << r.node << "\t" << f3(r.dx) << "\t" << f3(r.dy);
    if (!planar) out << "\t" << f3(r.dz);
    out << "\n";
  }
  out << "reactions [N]\n  node        rx        ry" << (planar ? "" : "        rz") << "\n";
  for (const auto& r : tables.reactions) {
    out << "  " << r.node << "\t" << f1(r.rx) << "\t" << f1(r.ry);
    if (!planar) out << "\t" << f1(r.rz);
    out << "\n";
  }
  out << "member axial forces [N]"
      << (options.paper_signs ? " (negative = tension)" : " (tension positive)") << "\n";
  for (const auto& r : tables.member_forces) {
    out << "  " << r.member << "\t" << to_string(r.kind) << "\t" << f1(r.axial_force) << "\t"
        << r.cable_status << "\n";
  }
}

int run_analyze(const std::string& file, const CommonFlags& flags, bool assume_taut) {
  const panto::Model model = load_model(file);
  panto::SolveResult result;
  if (assume_taut) {
    // One linear solve with every cable taut; no active/passive iteration.
    std::vector<panto::CableFlag> all_active;
    for (const auto& m : model.members) {
      if (m.kind == panto::MemberKind::Cable) {
        all_active.push_back(panto::CableFlag::Active);
      }
    }
    result = panto::solve_with_flags(model, all_active);
  } else {
    result = panto::iterate_cable_status(model);
  }

  panto::ReportOptions options;
  options.paper_signs = flags.paper_signs;
  options.full_precision = flags.full_precision;
  const panto::ResultTables tables = panto::make_result_tables(model, result, options);

  const std::filesystem::path dir(flags.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "displacements.csv", panto::displacements_csv(tables, options));
  write_file(dir / "reactions.csv", panto::reactions_csv(tables, options));
  write_file(dir / "member_forces.csv", panto::member_forces_csv(tables, options));
  write_file(dir / "structure.svg", panto::structure_svg(model, result));

  print_table(std::cout, tables, options, model.planar);
  if (assume_taut) {
    std::cout << "cable status: all " << result.cable_state.active_count()
              << " cables assumed taut (no iteration)\n";
  } else {
    std::cout << "cable status: " << result.cable_state.active_count() << " active, "
              << result.cable_state.passive_count() << " passive ("
              << result.cable_state.iterations << " iterations)\n";
  }
  std::cout << "max displacement: " << panto::format_double(result.max_displacement, 3)
            << " mm\n";
  return 0;
}

int run_optimize(const std::string& file, const CommonFlags& flags,
                 std::optional<std::uint64_t> seed, int workers) {
  if (!std::filesystem::exists(file)) {
    throw panto::Error("no such file: " + file);
  }
  const panto::ModelDocument doc = panto::load_model_document(file);
  if (!doc.optimizer) {
    throw panto::ConfigError("document has no optimizer block");
  }
  const panto::Model model = panto::build_model_or_throw(doc);
  const panto::DesignSpace space = panto::design_space_from_block(model, *doc.optimizer);

  panto::OptimizeConfig config;
  config.population = doc.optimizer->population;
  config.iterations = doc.optimizer->iterations;
  config.seed = seed.value_or(doc.optimizer->seed);
  config.workers = workers;

  const panto::OptimizeResult result = panto::optimize(model, space, config);

  panto::ReportOptions options;
  options.paper_signs = flags.paper_signs;
  options.full_precision = flags.full_precision;
  const auto summary = panto::make_optimizer_summary(model, space, result.best);

  const std::filesystem::path dir(flags.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "convergence.csv", panto::convergence_csv(result.history));
  write_file(dir / "convergence.svg", panto::convergence_svg(result.history));
  write_file(dir / "optimizer_summary.csv", panto::optimizer_summary_csv(summary, options));

  const double initial_weight = summary.empty() ? 0.0 : [&] {
    double w = 0.0;
    for (const auto& m : model.members) {
      w += model.material(m.material).unit_weight * model.member_length(m) *
           model.section(m.section).area;
    }
    return w;
  }();

  std::cout << "member,area_before_mm2,area_after_mm2,force_before_n,force_after_n\n";
  for (const auto& row : summary) {
    std::cout << row.member << ',' << panto::format_double(row.area_before, 3) << ','
              << panto::format_double(row.area_after, 3) << ','
              << panto::format_double((flags.paper_signs ? -1 : 1) * row.force_before, 1) << ','
              << panto::format_double((flags.paper_signs ? -1 : 1) * row.force_after, 1)
              << '\n';
  }
  std::cout << "best fitness: " << panto::format_full(result.best.fitness) << " kg ("
            << (result.best.feasible ? "feasible" : "infeasible") << ")\n";
  std::cout << "best weight: " << panto::format_full(result.best.weight) << " kg\n";
  if (initial_weight > 0.0) {
    std::cout << "weight reduction: "
              << panto::format_double(100.0 * (1.0 - result.best.weight / initial_weight), 1)
              << " %\n";
  }
  return 0;
}

int run_geometry(double inner_radius, double width, double total_angle, double unit_angle,
                 const std::string& pattern, bool three_d, double spacing,
                 const std::string& connector, const std::string& out_file) {
  const panto::PolarUnitGeometry geom =
      panto::polar_unit_parameters(inner_radius, width, total_angle, unit_angle);

  std::vector<panto::Section> sections = {
      {1, 28.0, 290.0, 290.0},
      {2, 6.28, 0.0, 0.0},
  };
  std::vector<panto::Material> materials = {{1, 210000.0, 7.85e-6}};

  panto::Model model = panto::build_polar_arch(geom, sections, materials, {},
                                               panto::arch_cable_pattern_from_string(pattern));
  if (three_d) {
    model = panto::extrude_to_3d(model, spacing,
                                 panto::connector_pattern_from_string(connector));
  }

  std::vector<std::string> provenance = {
      "generated by 'panto geometry'",
      "inner_radius " + panto::format_full(inner_radius) + " m, width " +
          panto::format_full(width) + " m, total_angle " + panto::format_full(total_angle) +
          " deg, unit_angle " + panto::format_full(unit_angle) + " deg, cable pattern " +
          pattern,
      "derived: units " + std::to_string(geom.unit_count) + ", bar length " +
          panto::format_full(geom.bar_length) + " m, semi bars " +
          panto::format_full(geom.semi_bar_1) + " / " + panto::format_full(geom.semi_bar_2) +
          " m, duplet angle " + panto::format_double(geom.duplet_angle, 3) + " deg",
  };
  if (three_d) {
    provenance.push_back("extruded to 3D: spacing " + panto::format_full(spacing) +
                         " m, connector pattern " + connector);
  }

  panto::ModelDocument doc = panto::document_from_model(model, {}, std::move(provenance));
  doc.title = "polar arch (generated)";
  const std::string text = panto::serialize_model_document(doc);
  if (out_file.empty() || out_file == "-") {
    std::cout << text;
  } else {
    write_file(out_file, text);
    std::cout << "wrote " << out_file << " (" << model.nodes.size() << " nodes, "
              << model.members.size() << " members)\n";
  }
  return 0;
}

int run_validate(const std::string& file) {
  if (!std::filesystem::exists(file)) {
    throw panto::Error("no such file: " + file);
  }
  const panto::ModelDocument doc = panto::load_model_document(file);
  const panto::BuildResult result = panto::build_model(doc);
  if (!result.ok()) {
    std::cerr << "invalid model (" << result.violations.size() << " violations)\n";
    for (const auto& v : result.violations) {
      std::cerr << "  [" << v.code << "] " << v.message << "\n";
    }
    return kExitValidation;
  }
  const panto::DofMap dofs = dof_map(*result.model);
  std::cout << "valid model: " << result.model->nodes.size() << " nodes, "
            << result.model->members.size() << " members, " << dofs.free_count
            << " free DoFs\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis and weight optimization of cable-stiffened scissor structures"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string model_file;

  bool assume_taut = false;
  auto* analyze = app.add_subcommand("analyze", "resolve cable states and report the response");
  analyze->add_option("model", model_file, "model document (JSON)")->required();
  analyze->add_flag("--assume-taut", assume_taut,
                    "keep every cable active, skip the active/passive iteration");
  analyze->add_flag("--paper-signs", flags.paper_signs,
                    "negate axial forces (published-table sign convention)");
  analyze->add_flag("--full-precision", flags.full_precision, "no rounding in outputs");
  analyze->add_option("--out-dir", flags.out_dir, "directory for CSV/SVG outputs");

  std::optional<std::uint64_t> seed;
  int workers = 1;
  auto* optimize = app.add_subcommand("optimize", "minimize structural weight");
  optimize->add_option("model", model_file, "model document (JSON)")->required();
  optimize->add_option("--seed", seed, "override the optimizer seed");
  optimize->add_option("--workers", workers, "parallel candidate evaluations")
      ->check(CLI::PositiveNumber);
  optimize->add_flag("--paper-signs", flags.paper_signs,
                     "negate axial forces in the summary");
  optimize->add_flag("--full-precision", flags.full_precision, "no rounding in outputs");
  optimize->add_option("--out-dir", flags.out_dir, "directory for CSV/SVG outputs");

  double inner_radius = 3.0, width = 0.45, total_angle = 180.0, unit_angle = 36.0;
  double spacing = 0.5;
  bool three_d = false;
  std::string pattern = "chords", connector = "scissors", out_file;
  auto* geometry = app.add_subcommand("geometry", "generate a polar-arch model document");
  geometry->add_option("--inner-radius", inner_radius, "inner hinge circle radius [m]");
  geometry->add_option("--width", width, "deployed radial width [m]");
  geometry->add_option("--total-angle", total_angle, "swept angle [deg]");
  geometry->add_option("--unit-angle", unit_angle, "angle per unit [deg]");
  geometry->add_option("--pattern", pattern, "cable pattern: chords, inner, outer");
  geometry->add_flag("--three-d", three_d, "extrude to a 3D double arch");
  geometry->add_option("--spacing", spacing, "transverse spacing for --three-d [m]");
  geometry->add_option("--connector", connector, "3D connector pattern: scissors, cables");
  geometry->add_option("--out", out_file, "output file (default stdout)");

  auto* validate = app.add_subcommand("validate", "parse and validate a model document");
  validate->add_option("model", model_file, "model document (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return run_analyze(model_file, flags, assume_taut);
    if (optimize->parsed()) return run_optimize(model_file, flags, seed, workers);
    if (geometry->parsed()) {
      return run_geometry(inner_radius, width, total_angle, unit_angle, pattern, three_d,
                          spacing, connector, out_file);
    }
    if (validate->parsed()) return run_validate(model_file);
  } catch (const panto::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const panto::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const panto::UnstableError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const panto::CableCycleError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const panto::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const panto::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
