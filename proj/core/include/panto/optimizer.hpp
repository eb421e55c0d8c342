#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "panto/model.hpp"

namespace panto {

/// Area design space. Each design variable drives the cross-section area
/// of one member group (a single member per group by default).
struct DesignSpace {
  std::vector<std::vector<int>> groups;  // member ids per variable
  Eigen::VectorXd lower_bound;           // mm^2, per variable
  Eigen::VectorXd upper_bound;           // mm^2, per variable
  std::vector<double> catalog;           // sorted admissible areas; empty = continuous
  double stress_limit = 0.0;             // N/mm^2
  double deflection_limit = 0.0;         // mm, per node per axis
  double penalty_exponent = 2.0;

  int variable_count() const { return static_cast<int>(groups.size()); }

  /// One variable per member, uniform bounds.
  static DesignSpace per_member(const Model& model, double lower, double upper,
                                double stress_limit, double deflection_limit,
                                double penalty_exponent = 2.0);

  /// Clamp to bounds, then snap to the catalog (smallest entry not below
  /// the value; the largest entry when none qualifies).
  double constrain(int variable, double value) const;

  void validate() const;  // throws ConfigError
};

struct Candidate {
  Eigen::VectorXd areas;          // mm^2, per variable
  double weight = 0.0;            // kg
  double stress_penalty = 0.0;    // sum of relative overstress
  double deflection_penalty = 0.0;
  double penalty = 1.0;           // (1 + stress + deflection)^epsilon
  double fitness = 0.0;           // penalty * weight, kg
  bool feasible = false;
  bool solvable = true;           // false when the design could not be solved
};

/// Applies the areas, runs the tension-only analysis, and scores the
/// design: weight, cumulative stress/deflection penalties, multiplicative
/// total penalty and penalized fitness. An unsolvable design is returned
/// with a large finite fitness instead of raising.
Candidate evaluate_candidate(const Model& model, const DesignSpace& space,
                             const Eigen::VectorXd& areas);

/// Source of every random draw the optimizer makes. Draws happen in one
/// documented order on the coordinator; evaluations never consume
/// randomness, so results are independent of worker count.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual double unit() = 0;                      // [0, 1)
  virtual int teaching_factor() = 0;              // 1 or 2
  virtual int pick_other(int count, int self) = 0;  // uniform over count-1 others
};

/// One mt19937_64 stream; unit() takes the top 53 bits, teaching_factor()
/// and pick_other() derive from unit() directly (no standard-library
/// distributions, whose output is implementation-defined), so identical
/// seeds give identical runs on every platform.
class MasterRng final : public RandomSource {
 public:
  explicit MasterRng(std::uint64_t seed) : engine_(seed) {}
  double unit() override;
  int teaching_factor() override;
  int pick_other(int count, int self) override;

 private:
  std::mt19937_64 engine_;
};

struct Population {
  std::vector<Candidate> members;
  int teacher_index() const;            // best fitness, lowest index on ties
  Eigen::VectorXd variable_means() const;
};

/// Batch teacher phase: every candidate moves by r * (teacher - TF * mean)
/// computed from the phase-start population, then greedy acceptance per
/// candidate. Draw order: (r_i, TF_i) for i = 0..NP-1, then evaluations.
void teacher_step(Population& population, const Model& model, const DesignSpace& space,
                  RandomSource& rng, int workers = 1);

/// Batch learner phase: candidate p pairs with a random distinct q and
/// moves away from (or toward) it depending on which fitness is better.
/// Draw order: (q_i, r_i) for i = 0..NP-1, then evaluations.
void learner_step(Population& population, const Model& model, const DesignSpace& space,
                  RandomSource& rng, int workers = 1);

struct ConvergenceRecord {
  int iteration = 0;             // 0 = after initialization
  long function_evaluations = 0;
  double best_fitness = 0.0;     // kg, best ever
  double best_weight = 0.0;      // kg, weight of the best-ever candidate
  bool feasible = false;
};

struct OptimizeConfig {
  int population = 25;
  int iterations = 100;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct OptimizeResult {
  Candidate best;
  std::vector<ConvergenceRecord> history;  // one record per iteration + init
};

/// Full run: uniform random initialization within bounds (snapped when a
/// catalog is set), then alternating teacher/learner phases. Best-ever
/// fitness is monotone non-increasing across the history.
OptimizeResult optimize(const Model& model, const DesignSpace& space,
                        const OptimizeConfig& config);

}  // namespace panto
