#include "povmshadow/shadow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "povmshadow/distributions.hpp"
#include "povmshadow/error.hpp"
#include "povmshadow/online_learner.hpp"

namespace povmshadow {

void ShadowConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange, "epsilon must lie in (0, 1/2)");
  }
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange, "delta must lie in (0, 1/2)");
  }
  if (!(c0 > 0.0 && c1 > 0.0 && c2 > 0.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "C0, C1, C2 must be positive");
  }
  if (eta && !(*eta > 0.0 && *eta < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange, "eta must lie in (0, 1/2)");
  }
}

BatchPlan plan_batches(const ShadowConfig& config, std::size_t dim, std::size_t outcomes,
                       std::size_t measurements) {
  config.validate();
  if (dim < 2 || outcomes < 2 || measurements < 1) {
    throw Error(ErrorCode::ParameterOutOfRange, "need d >= 2, K >= 2, M >= 1");
  }
  const double eps2 = config.epsilon * config.epsilon;
  BatchPlan plan;
  plan.t0 = static_cast<std::uint64_t>(
                std::ceil(config.c0 * std::log(static_cast<double>(dim)) / eps2)) + 1;
  plan.delta0 = config.delta / (2.0 * static_cast<double>(plan.t0));
  plan.n0 = quantum_budget_copies(outcomes, measurements, config.epsilon, plan.delta0, config.c1);
  double nb = config.c2 * static_cast<double>(outcomes) * std::log(1.0 / plan.delta0) / eps2;
  if (config.nb_log_m_squared) {
    const double log_m = std::log(static_cast<double>(std::max<std::size_t>(measurements, 2)));
    nb *= log_m * log_m;
  }
  plan.nb = static_cast<std::uint64_t>(std::ceil(nb));
  plan.total = plan.t0 * (plan.n0 + plan.nb);
  return plan;
}

ShadowResult run_shadow(const DensityMatrix& state, const std::vector<Povm>& povms,
                        const ShadowConfig& config, Rng& rng) {
  if (povms.empty()) throw Error(ErrorCode::EmptyInstance, "no measurements");
  const std::size_t d = povms.front().dim();
  const std::size_t k = povms.front().outcomes();
  for (const auto& p : povms) {
    if (p.dim() != d) throw Error(ErrorCode::DimensionMismatch, "measurement dimensions differ");
    if (p.outcomes() != k) throw Error(ErrorCode::LengthMismatch, "outcome counts differ");
  }
  if (state.dim() != d) throw Error(ErrorCode::DimensionMismatch, "state vs measurements");

  ShadowResult result;
  result.plan = plan_batches(config, d, k, povms.size());
  result.eta = config.eta ? *config.eta : eta_for(result.plan.t0, d).value;

  std::vector<DistVector> truth;
  truth.reserve(povms.size());
  for (const auto& p : povms) truth.push_back(outcome_distribution(p, state));

  LearnerState learner = LearnerState::initial(d, result.eta);
  const SearchOptions search{config.c1};

  auto predictions = [&] {
    std::vector<DistVector> mu;
    mu.reserve(povms.size());
    for (const auto& p : povms) mu.push_back(outcome_distribution(p, learner.hypothesis));
    return mu;
  };

  ThresholdInstance instance{povms, {}, config.epsilon, result.plan.delta0};
  while (true) {
    ++result.rounds;
    const std::string tag = "batch[" + std::to_string(result.rounds) + "]";
    result.quantum.charge(tag + ".threshold", result.plan.n0);
    result.quantum.charge(tag + ".estimate", result.plan.nb);

    instance.thresholds = predictions();
    const ThresholdResult search_result =
        threshold_search(instance, state, config.trigger, rng, search);
    result.honest.absorb(search_result.honest);
    if (!search_result.verdict.violator) {
      result.certified = true;
      break;
    }

    const std::size_t flagged = search_result.verdict.index;
    ++result.bad_iterations;
    const Estimate b = estimate_distribution(truth[flagged], config.epsilon / 4.0,
                                             result.plan.delta0, rng);
    result.honest.charge(tag + ".estimate[" + std::to_string(flagged) + "]", b.copies);
    const GradientMatrix g =
        build_gradient(povms[flagged], subgradient_partition(instance.thresholds[flagged],
                                                             b.distribution));
    learner = rftl_update(learner, g);

    if (result.rounds >= result.plan.t0) {
      result.budget_exhausted = true;
      break;
    }
  }

  result.hypothesis = learner.hypothesis;
  result.outputs = predictions();
  for (std::size_t i = 0; i < povms.size(); ++i) {
    result.max_tv_to_truth = std::max(result.max_tv_to_truth, tv_distance(result.outputs[i], truth[i]));
  }
  result.verified = result.max_tv_to_truth <= config.epsilon;
  return result;
}

OperatorEstimates estimate_operator_expectations(const DensityMatrix& state,
                                                 const std::vector<HermitianMatrix>& operators,
                                                 const std::vector<Povm>& povms,
                                                 const std::vector<std::vector<double>>& values,
                                                 double epsilon, double delta, Rng& rng,
                                                 ShadowConfig base) {
  if (operators.size() != povms.size() || values.size() != povms.size()) {
    throw Error(ErrorCode::ValueLengthMismatch, "one operator, POVM and value list per index");
  }
  if (povms.empty()) throw Error(ErrorCode::EmptyInstance, "no operators");
  double max_norm = 0.0;
  for (std::size_t i = 0; i < povms.size(); ++i) {
    if (values[i].size() != povms[i].outcomes()) {
      throw Error(ErrorCode::ValueLengthMismatch, "operator " + std::to_string(i));
    }
    if (operators[i].dim() != povms[i].dim()) {
      throw Error(ErrorCode::DimensionMismatch, "operator " + std::to_string(i));
    }
    CMatrix realised = CMatrix::Zero(operators[i].matrix().rows(), operators[i].matrix().cols());
    for (std::size_t j = 0; j < values[i].size(); ++j) realised += values[i][j] * povms[i][j].matrix();
    if (max_abs(realised - operators[i].matrix()) > 1e-8) {
      throw Error(ErrorCode::OperatorMismatch,
                  "measurement " + std::to_string(i) + " does not realise its operator");
    }
    max_norm = std::max(max_norm, spectral_norm(operators[i]));
  }
  if (!(max_norm > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "all operators vanish");

  OperatorEstimates out;
  out.distribution_accuracy = epsilon / (2.0 * max_norm);
  base.epsilon = out.distribution_accuracy;
  base.delta = delta;
  out.shadow = run_shadow(state, povms, base, rng);
  out.values.reserve(povms.size());
  for (std::size_t i = 0; i < povms.size(); ++i) {
    double e = 0.0;
    for (std::size_t j = 0; j < values[i].size(); ++j) e += values[i][j] * out.shadow.outputs[i][j];
    out.values.push_back(e);
  }
  return out;
}

SpinMeasurement spin_povm(std::size_t qubits, SpinAxis axis) {
  if (qubits < 1) throw Error(ErrorCode::ParameterOutOfRange, "need at least one qubit");
  if (qubits > 10) throw Error(ErrorCode::TooLarge, std::to_string(qubits) + " qubits (max 10)");
  const std::size_t d = std::size_t{1} << qubits;
  const auto n = static_cast<Eigen::Index>(d);

  // Columns: |+n> and |-n>, eigenvectors of n.sigma with eigenvalues +1, -1.
  const double c = std::cos(axis.theta / 2.0);
  const double s = std::sin(axis.theta / 2.0);
  const Complex e_phi = std::polar(1.0, axis.phi);
  CMatrix single(2, 2);
  single << c, -std::conj(e_phi) * s, e_phi * s, c;

  const bool computational = std::abs(s) < 1e-15;
  CMatrix basis;
  if (!computational) {
    basis = single;
    for (std::size_t q = 1; q < qubits; ++q) basis = kron(basis, single);
  }

  std::vector<QuantumEvent> events;
  std::vector<double> values;
  CMatrix observable = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k <= qubits; ++k) {
    CMatrix a = CMatrix::Zero(n, n);
    if (computational) {
      for (std::size_t x = 0; x < d; ++x) {
        if (static_cast<std::size_t>(std::popcount(x)) == k) {
          a(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = 1.0;
        }
      }
    } else {
      std::vector<Eigen::Index> cols;
      for (std::size_t x = 0; x < d; ++x) {
        if (static_cast<std::size_t>(std::popcount(x)) == k) cols.push_back(static_cast<Eigen::Index>(x));
      }
      CMatrix u(n, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c2 = 0; c2 < cols.size(); ++c2) u.col(static_cast<Eigen::Index>(c2)) = basis.col(cols[c2]);
      a = u * u.adjoint();
    }
    const double v = static_cast<double>(qubits) - 2.0 * static_cast<double>(k);
    observable += v * a;
    values.push_back(v);
    events.emplace_back(HermitianMatrix::hermitian_part(a));
  }
  return SpinMeasurement{Povm(std::move(events)), std::move(values),
                         HermitianMatrix::hermitian_part(observable)};
}

}  // namespace povmshadow
