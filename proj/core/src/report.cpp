#include "panto/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace panto {

std::string format_double(double value, int decimals) {
  // Round away the signed zero first so "-0.000" never appears.
  const double scale = std::pow(10.0, decimals);
  double rounded = std::round(value * scale) / scale;
  if (rounded == 0.0) rounded = 0.0;

  char buffer[64];
  auto res = std::to_chars(buffer, buffer + sizeof(buffer), rounded,
                           std::chars_format::fixed, decimals);
  return std::string(buffer, res.ptr);
}

std::string format_full(double value) {
  char buffer[64];
  auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, res.ptr);
}

namespace {

std::string fmt(double value, bool full, int decimals) {
  return full ? format_full(value) : format_double(value, decimals);
}

}  // namespace

ResultTables make_result_tables(const Model& model, const SolveResult& result,
                                const ReportOptions& options) {
  ResultTables tables;
  const double sign = options.paper_signs ? -1.0 : 1.0;

  for (std::size_t ni = 0; ni < model.nodes.size(); ++ni) {
    tables.displacements.push_back({model.nodes[ni].id, result.displacements(ni, 0),
                                    result.displacements(ni, 1), result.displacements(ni, 2)});
  }
  for (const auto& r : result.reactions) {
    tables.reactions.push_back({r.node, r.force.x(), r.force.y(), r.force.z()});
  }

  std::size_t cable_index = 0;
  for (std::size_t mi = 0; mi < model.members.size(); ++mi) {
    const Member& m = model.members[mi];
    std::string status = "-";
    if (m.kind == MemberKind::Cable) {
      status = result.cable_state.flags[cable_index++] == CableFlag::Active ? "active"
                                                                            : "passive";
    }
    tables.member_forces.push_back(
        {m.id, m.kind, sign * result.member_forces[mi], status});
  }
  return tables;
}

std::string displacements_csv(const ResultTables& tables, const ReportOptions& options) {
  std::ostringstream out;
  out << "node,dx_mm,dy_mm,dz_mm\n";
  for (const auto& r : tables.displacements) {
    out << r.node << ',' << fmt(r.dx, options.full_precision, 3) << ','
        << fmt(r.dy, options.full_precision, 3) << ','
        << fmt(r.dz, options.full_precision, 3) << '\n';
  }
  return out.str();
}

std::string reactions_csv(const ResultTables& tables, const ReportOptions& options) {
  std::ostringstream out;
  out << "node,rx_n,ry_n,rz_n\n";
  for (const auto& r : tables.reactions) {
    out << r.node << ',' << fmt(r.rx, options.full_precision, 1) << ','
        << fmt(r.ry, options.full_precision, 1) << ','
        << fmt(r.rz, options.full_precision, 1) << '\n';
  }
  return out.str();
}

std::string member_forces_csv(const ResultTables& tables, const ReportOptions& options) {
  std::ostringstream out;
  out << "member,kind,axial_force_n,cable_status\n";
  for (const auto& r : tables.member_forces) {
    out << r.member << ',' << to_string(r.kind) << ','
        << fmt(r.axial_force, options.full_precision, 1) << ',' << r.cable_status << '\n';
  }
  return out.str();
}

std::vector<OptimizerSummaryRow> make_optimizer_summary(const Model& model,
                                                        const DesignSpace& space,
                                                        const Candidate& best) {
  std::vector<std::pair<int, double>> assignment;
  for (int j = 0; j < space.variable_count(); ++j) {
    for (int id : space.groups[j]) {
      assignment.emplace_back(id, best.areas(j));
    }
  }
  const Model optimized = model.with_member_areas(assignment);

  const SolveResult before = iterate_cable_status(model);
  const SolveResult after = iterate_cable_status(optimized);

  std::vector<OptimizerSummaryRow> rows;
  for (std::size_t mi = 0; mi < model.members.size(); ++mi) {
    const Member& m = model.members[mi];
    rows.push_back({m.id, model.section(m.section).area,
                    optimized.section(optimized.members[mi].section).area,
                    before.member_forces[mi], after.member_forces[mi]});
  }
  return rows;
}

std::string optimizer_summary_csv(const std::vector<OptimizerSummaryRow>& rows,
                                  const ReportOptions& options) {
  const double sign = options.paper_signs ? -1.0 : 1.0;
  std::ostringstream out;
  out << "member,area_before_mm2,area_after_mm2,force_before_n,force_after_n\n";
  for (const auto& r : rows) {
    out << r.member << ',' << fmt(r.area_before, options.full_precision, 3) << ','
        << fmt(r.area_after, options.full_precision, 3) << ','
        << fmt(sign * r.force_before, options.full_precision, 1) << ','
        << fmt(sign * r.force_after, options.full_precision, 1) << '\n';
  }
  return out.str();
}

std::string convergence_csv(const std::vector<ConvergenceRecord>& history) {
  std::ostringstream out;
  out << "iteration,function_evaluations,best_fitness_kg,best_weight_kg,feasible_flag\n";
  for (const auto& r : history) {
    out << r.iteration << ',' << r.function_evaluations << ',' << format_full(r.best_fitness)
        << ',' << format_full(r.best_weight) << ',' << (r.feasible ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

struct Box {
  double min_x = 0, min_y = 0, max_x = 1, max_y = 1;
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

}  // namespace

std::string structure_svg(const Model& model, const SolveResult& result) {
  // Project on the x-y plane; overlay the deflected shape scaled so the
  // largest displacement spans ~5% of the drawing.
  Box box;
  box.min_x = box.min_y = 1e300;
  box.max_x = box.max_y = -1e300;
  for (const auto& n : model.nodes) {
    box.min_x = std::min(box.min_x, n.position.x());
    box.max_x = std::max(box.max_x, n.position.x());
    box.min_y = std::min(box.min_y, n.position.y());
    box.max_y = std::max(box.max_y, n.position.y());
  }
  const double extent = std::max({box.width(), box.height(), 1.0});
  const double margin = 0.08 * extent;
  const double scale = 640.0 / (extent + 2.0 * margin);
  const double amplify =
      result.max_displacement > 0.0 ? 0.05 * extent / result.max_displacement : 0.0;

  const auto px = [&](double x) { return (x - box.min_x + margin) * scale; };
  const auto py = [&](double y) { return (box.max_y - y + margin) * scale; };

  std::ostringstream svg;
  const double w = (box.width() + 2 * margin) * scale;
  const double h = (box.height() + 2 * margin) * scale;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(w, 0)
      << "\" height=\"" << format_double(h, 0) << "\" viewBox=\"0 0 " << format_double(w, 0)
      << ' ' << format_double(h, 0) << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  std::size_t cable_index = 0;
  for (std::size_t mi = 0; mi < model.members.size(); ++mi) {
    const Member& m = model.members[mi];
    std::string stroke = "#1f2937";
    std::string dash;
    double width_px = m.kind == MemberKind::Uniplet ? 2.5 : 1.5;
    if (m.kind == MemberKind::Cable) {
      const bool active = result.cable_state.flags[cable_index++] == CableFlag::Active;
      stroke = active ? "#2563eb" : "#9ca3af";
      dash = " stroke-dasharray=\"6 4\"";
    }
    const Vec3 a = model.node(m.nodes.front()).position;
    const Vec3 b = model.node(m.nodes.back()).position;
    svg << "  <line x1=\"" << format_double(px(a.x()), 1) << "\" y1=\""
        << format_double(py(a.y()), 1) << "\" x2=\"" << format_double(px(b.x()), 1)
        << "\" y2=\"" << format_double(py(b.y()), 1) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"" << format_double(width_px, 1) << "\"" << dash << ">\n"
        << "    <title>member " << m.id << " (" << to_string(m.kind)
        << "): axial " << format_double(result.member_forces[mi], 1) << " N</title>\n"
        << "  </line>\n";
  }

  // Deflected member chords.
  if (amplify > 0.0) {
    for (const auto& m : model.members) {
      const int a = model.node_index(m.nodes.front());
      const int b = model.node_index(m.nodes.back());
      const Vec3 pa = model.nodes[a].position + amplify * result.displacements.row(a).transpose();
      const Vec3 pb = model.nodes[b].position + amplify * result.displacements.row(b).transpose();
      svg << "  <line x1=\"" << format_double(px(pa.x()), 1) << "\" y1=\""
          << format_double(py(pa.y()), 1) << "\" x2=\"" << format_double(px(pb.x()), 1)
          << "\" y2=\"" << format_double(py(pb.y()), 1)
          << "\" stroke=\"#dc2626\" stroke-width=\"1.0\" opacity=\"0.6\"/>\n";
    }
  }

  for (const auto& n : model.nodes) {
    svg << "  <circle cx=\"" << format_double(px(n.position.x()), 1) << "\" cy=\""
        << format_double(py(n.position.y()), 1) << "\" r=\"3\" fill=\"#111827\">\n"
        << "    <title>node " << n.id << "</title>\n  </circle>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string convergence_svg(const std::vector<ConvergenceRecord>& history) {
  const double width = 640, height = 400, pad = 50;
  double min_f = 1e300, max_f = -1e300;
  long max_e = 1;
  for (const auto& r : history) {
    min_f = std::min(min_f, r.best_fitness);
    max_f = std::max(max_f, r.best_fitness);
    max_e = std::max(max_e, r.function_evaluations);
  }
  if (min_f == max_f) max_f = min_f + 1.0;

  const auto px = [&](double evals) { return pad + evals / max_e * (width - 2 * pad); };
  const auto py = [&](double f) {
    return height - pad - (f - min_f) / (max_f - min_f) * (height - 2 * pad);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "  <line x1=\"" << pad << "\" y1=\"" << height - pad << "\" x2=\"" << width - pad
      << "\" y2=\"" << height - pad << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
      << height - pad << "\" stroke=\"black\"/>\n"
      << "  <text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">function evaluations</text>\n"
      << "  <text x=\"14\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 "
      << height / 2 << ")\">best fitness [kg]</text>\n";

  svg << "  <polyline fill=\"none\" stroke=\"#2563eb\" stroke-width=\"2\" points=\"";
  for (const auto& r : history) {
    svg << format_double(px(static_cast<double>(r.function_evaluations)), 1) << ','
        << format_double(py(r.best_fitness), 1) << ' ';
  }
  svg << "\"/>\n";

  svg << "  <text x=\"" << width - pad << "\" y=\"" << pad - 8
      << "\" text-anchor=\"end\" font-size=\"12\">final "
      << format_double(history.empty() ? 0.0 : history.back().best_fitness, 4)
      << " kg</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace panto
