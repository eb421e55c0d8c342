#include "panto/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "panto/errors.hpp"
#include "panto/solver.hpp"

namespace panto {

DesignSpace DesignSpace::per_member(const Model& model, double lower, double upper,
                                    double stress_limit, double deflection_limit,
                                    double penalty_exponent) {
  DesignSpace space;
  for (const auto& m : model.members) {
    space.groups.push_back({m.id});
  }
  const int n = space.variable_count();
  space.lower_bound = Eigen::VectorXd::Constant(n, lower);
  space.upper_bound = Eigen::VectorXd::Constant(n, upper);
  space.stress_limit = stress_limit;
  space.deflection_limit = deflection_limit;
  space.penalty_exponent = penalty_exponent;
  space.validate();
  return space;
}

double DesignSpace::constrain(int variable, double value) const {
  double v = std::clamp(value, lower_bound(variable), upper_bound(variable));
  if (!catalog.empty()) {
    auto it = std::lower_bound(catalog.begin(), catalog.end(), v);
    v = it != catalog.end() ? *it : catalog.back();
  }
  return v;
}

void DesignSpace::validate() const {
  const int n = variable_count();
  if (n == 0) throw ConfigError("design space: no variables");
  if (lower_bound.size() != n || upper_bound.size() != n) {
    throw ConfigError("design space: bound vectors must match the variable count");
  }
  for (int j = 0; j < n; ++j) {
    if (!(lower_bound(j) > 0.0)) throw ConfigError("design space: lower bounds must be positive");
    if (lower_bound(j) > upper_bound(j)) {
      throw ConfigError("design space: lower bound exceeds upper bound");
    }
  }
  if (!std::is_sorted(catalog.begin(), catalog.end())) {
    throw ConfigError("design space: catalog must be sorted ascending");
  }
  for (double c : catalog) {
    if (c < lower_bound.minCoeff() || c > upper_bound.maxCoeff()) {
      throw ConfigError("design space: catalog entry outside the variable bounds");
    }
  }
  if (!(penalty_exponent > 0.0)) throw ConfigError("design space: penalty exponent must be positive");
  if (!(stress_limit > 0.0)) throw ConfigError("design space: stress limit must be positive");
  if (!(deflection_limit > 0.0)) throw ConfigError("design space: deflection limit must be positive");
}

namespace {

Model apply_areas(const Model& model, const DesignSpace& space, const Eigen::VectorXd& areas) {
  std::vector<std::pair<int, double>> assignment;
  for (int j = 0; j < space.variable_count(); ++j) {
    for (int member_id : space.groups[j]) {
      assignment.emplace_back(member_id, areas(j));
    }
  }
  return model.with_member_areas(assignment);
}

double total_weight(const Model& model) {
  double w = 0.0;
  for (const auto& m : model.members) {
    w += model.material(m.material).unit_weight * model.member_length(m) *
         model.section(m.section).area;
  }
  return w;
}

}  // namespace

Candidate evaluate_candidate(const Model& model, const DesignSpace& space,
                             const Eigen::VectorXd& areas) {
  Candidate cand;
  cand.areas = areas;

  const Model design = apply_areas(model, space, areas);
  cand.weight = total_weight(design);

  SolveResult solution;
  try {
    solution = iterate_cable_status(design);
  } catch (const Error&) {
    // Unsolvable design: keep it in the population with the worst-case
    // penalty instead of aborting the run.
    cand.solvable = false;
    cand.feasible = false;
    cand.stress_penalty = 1e3;
    cand.penalty = std::pow(1.0 + 1e3, space.penalty_exponent);
    cand.fitness = cand.penalty * cand.weight;
    return cand;
  }

  for (std::size_t i = 0; i < design.members.size(); ++i) {
    const Member& m = design.members[i];
    const double area = design.section(m.section).area;
    const double stress = std::abs(solution.member_forces[i]) / area;
    if (stress > space.stress_limit) {
      cand.stress_penalty += (stress - space.stress_limit) / space.stress_limit;
    }
  }

  const int axes = design.planar ? 2 : 3;
  for (Eigen::Index r = 0; r < solution.displacements.rows(); ++r) {
    for (int axis = 0; axis < axes; ++axis) {
      const double d = std::abs(solution.displacements(r, axis));
      if (d > space.deflection_limit) {
        cand.deflection_penalty += (d - space.deflection_limit) / space.deflection_limit;
      }
    }
  }

  cand.feasible = cand.stress_penalty == 0.0 && cand.deflection_penalty == 0.0;
  cand.penalty = std::pow(1.0 + cand.stress_penalty + cand.deflection_penalty,
                          space.penalty_exponent);
  cand.fitness = cand.penalty * cand.weight;
  return cand;
}

double MasterRng::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int MasterRng::teaching_factor() { return unit() < 0.5 ? 1 : 2; }

int MasterRng::pick_other(int count, int self) {
  const int k = static_cast<int>(unit() * (count - 1));
  return k >= self ? k + 1 : k;
}

int Population::teacher_index() const {
  int best = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i].fitness < members[best].fitness) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

Eigen::VectorXd Population::variable_means() const {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(members.front().areas.size());
  for (const auto& c : members) {
    mean += c.areas;
  }
  return mean / static_cast<double>(members.size());
}

namespace {

// Evaluate one proposal per candidate, index-ordered merge so the outcome
// does not depend on the worker count.
std::vector<Candidate> evaluate_batch(const Model& model, const DesignSpace& space,
                                      const std::vector<Eigen::VectorXd>& proposals,
                                      int workers) {
  std::vector<Candidate> results(proposals.size());
  if (workers <= 1 || proposals.size() <= 1) {
    for (std::size_t i = 0; i < proposals.size(); ++i) {
      results[i] = evaluate_candidate(model, space, proposals[i]);
    }
    return results;
  }

  std::atomic<std::size_t> cursor{0};
  const int thread_count = std::min<int>(workers, static_cast<int>(proposals.size()));
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (int t = 0; t < thread_count; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = cursor.fetch_add(1); i < proposals.size(); i = cursor.fetch_add(1)) {
        results[i] = evaluate_candidate(model, space, proposals[i]);
      }
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

void greedy_merge(Population& population, const std::vector<Candidate>& proposals) {
  for (std::size_t i = 0; i < population.members.size(); ++i) {
    if (proposals[i].fitness < population.members[i].fitness) {
      population.members[i] = proposals[i];
    }
  }
}

}  // namespace

void teacher_step(Population& population, const Model& model, const DesignSpace& space,
                  RandomSource& rng, int workers) {
  const int np = static_cast<int>(population.members.size());
  const Eigen::VectorXd teacher = population.members[population.teacher_index()].areas;
  const Eigen::VectorXd mean = population.variable_means();

  std::vector<Eigen::VectorXd> proposals(np);
  for (int i = 0; i < np; ++i) {
    const double r = rng.unit();
    const double tf = static_cast<double>(rng.teaching_factor());
    Eigen::VectorXd x = population.members[i].areas + r * (teacher - tf * mean);
    for (int j = 0; j < x.size(); ++j) {
      x(j) = space.constrain(j, x(j));
    }
    proposals[i] = std::move(x);
  }
  greedy_merge(population, evaluate_batch(model, space, proposals, workers));
}

void learner_step(Population& population, const Model& model, const DesignSpace& space,
                  RandomSource& rng, int workers) {
  const int np = static_cast<int>(population.members.size());
  if (np < 2) throw ConfigError("learner phase needs at least two candidates");

  std::vector<Eigen::VectorXd> proposals(np);
  for (int p = 0; p < np; ++p) {
    const int q = rng.pick_other(np, p);
    const double r = rng.unit();
    const Candidate& cp = population.members[p];
    const Candidate& cq = population.members[q];
    Eigen::VectorXd x = cp.fitness < cq.fitness
                            ? (cp.areas + r * (cp.areas - cq.areas)).eval()
                            : (cp.areas + r * (cq.areas - cp.areas)).eval();
    for (int j = 0; j < x.size(); ++j) {
      x(j) = space.constrain(j, x(j));
    }
    proposals[p] = std::move(x);
  }
  greedy_merge(population, evaluate_batch(model, space, proposals, workers));
}

OptimizeResult optimize(const Model& model, const DesignSpace& space,
                        const OptimizeConfig& config) {
  space.validate();
  if (config.population < 2) throw ConfigError("optimize: population must be at least 2");
  if (config.iterations < 1) throw ConfigError("optimize: need at least one iteration");
  if (config.workers < 1) throw ConfigError("optimize: workers must be positive");

  MasterRng rng(config.seed);
  const int np = config.population;
  const int nv = space.variable_count();

  // Draw the whole initial population first, then evaluate.
  std::vector<Eigen::VectorXd> initial(np, Eigen::VectorXd(nv));
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double span = space.upper_bound(j) - space.lower_bound(j);
      initial[i](j) = space.constrain(j, space.lower_bound(j) + rng.unit() * span);
    }
  }

  Population population;
  population.members = evaluate_batch(model, space, initial, config.workers);

  OptimizeResult result;
  result.best = population.members[population.teacher_index()];
  long evaluations = np;

  const auto record = [&](int iteration) {
    ConvergenceRecord rec;
    rec.iteration = iteration;
    rec.function_evaluations = evaluations;
    rec.best_fitness = result.best.fitness;
    rec.best_weight = result.best.weight;
    rec.feasible = result.best.feasible;
    result.history.push_back(rec);
  };
  record(0);

  for (int iteration = 1; iteration <= config.iterations; ++iteration) {
    teacher_step(population, model, space, rng, config.workers);
    evaluations += np;
    learner_step(population, model, space, rng, config.workers);
    evaluations += np;

    const Candidate& best_now = population.members[population.teacher_index()];
    if (best_now.fitness < result.best.fitness) {
      result.best = best_now;
    }
    record(iteration);
  }
  return result;
}

}  // namespace panto
