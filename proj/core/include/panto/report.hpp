#pragma once

#include <string>
#include <vector>

#include "panto/model.hpp"
#include "panto/optimizer.hpp"
#include "panto/solver.hpp"

namespace panto {

/// Fixed-layout result tables mirroring the CSV outputs. All number
/// formatting is locale independent ('.' decimal separator always).
struct ResultTables {
  struct DisplacementRow {
    int node;
    double dx, dy, dz;  // mm
  };
  struct ReactionRow {
    int node;
    double rx, ry, rz;  // N
  };
  struct MemberForceRow {
    int member;
    MemberKind kind;
    double axial_force;       // N, tension positive (negated by paper_signs)
    std::string cable_status;  // "active" / "passive" / "-"
  };

  std::vector<DisplacementRow> displacements;
  std::vector<ReactionRow> reactions;
  std::vector<MemberForceRow> member_forces;
};

struct ReportOptions {
  bool paper_signs = false;     // negate axial forces for published-table comparison
  bool full_precision = false;  // default: displacements 3 decimals, forces 1
};

ResultTables make_result_tables(const Model& model, const SolveResult& result,
                                const ReportOptions& options = {});

std::string displacements_csv(const ResultTables& tables, const ReportOptions& options = {});
std::string reactions_csv(const ResultTables& tables, const ReportOptions& options = {});
std::string member_forces_csv(const ResultTables& tables, const ReportOptions& options = {});

/// Optimizer summary rows (per member: area and axial force before/after).
struct OptimizerSummaryRow {
  int member;
  double area_before, area_after;    // mm^2
  double force_before, force_after;  // N
};
std::vector<OptimizerSummaryRow> make_optimizer_summary(const Model& model,
                                                        const DesignSpace& space,
                                                        const Candidate& best);
std::string optimizer_summary_csv(const std::vector<OptimizerSummaryRow>& rows,
                                  const ReportOptions& options = {});

/// iteration,function_evaluations,best_fitness_kg,best_weight_kg,feasible
std::string convergence_csv(const std::vector<ConvergenceRecord>& history);

/// Static SVG views: the structure with cables dashed (passive ones
/// greyed) and an exaggerated deflected overlay, and the best-fitness
/// convergence curve against function evaluations.
std::string structure_svg(const Model& model, const SolveResult& result);
std::string convergence_svg(const std::vector<ConvergenceRecord>& history);

/// Locale-independent float formatting used by every writer.
std::string format_double(double value, int decimals);
std::string format_full(double value);

}  // namespace panto
