#include "povmshadow/online_learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "povmshadow/distributions.hpp"
#include "povmshadow/error.hpp"
#include "povmshadow/threshold_search.hpp"
#include "povmshadow/tolerances.hpp"

namespace povmshadow {

namespace {

int kink_sign(double x) {
  if (x > tol::kKink) return 1;
  if (x < -tol::kKink) return -1;
  return 0;
}

}  // namespace

double loss(const DistVector& mu, const DistVector& b) { return tv_distance(mu, b); }

SubgradientPartition subgradient_partition(const DistVector& mu, const DistVector& b) {
  if (mu.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "prediction vs feedback");
  if (mu.size() < 2) throw Error(ErrorCode::LengthMismatch, "need K >= 2 outcomes");
  const std::size_t free = mu.size() - 1;

  std::vector<int> signs(free);
  int positive = 0;
  int negative = 0;
  for (std::size_t j = 0; j < free; ++j) {
    signs[j] = kink_sign(mu[j] - b[j]);
    positive += signs[j] > 0;
    negative += signs[j] < 0;
  }
  int last = kink_sign(mu[free] - b[free]);
  if (last == 0) last = negative > positive ? -1 : 1;

  SubgradientPartition out;
  for (std::size_t j = 0; j < free; ++j) {
    const int s = signs[j] == 0 ? last : signs[j];
    switch ((s - last) / 2) {
      case 1: out.plus.push_back(j); break;
      case -1: out.minus.push_back(j); break;
      default: out.zero.push_back(j); break;
    }
  }
  return out;
}

GradientMatrix build_gradient(const Povm& povm, const SubgradientPartition& partition) {
  const std::size_t free = povm.outcomes() - 1;
  const auto d = static_cast<Eigen::Index>(povm.dim());
  CMatrix g = CMatrix::Zero(d, d);
  for (std::size_t j : partition.plus) {
    if (j >= free) throw Error(ErrorCode::IndexOutOfRange, "gradient index " + std::to_string(j));
    g += povm[j].matrix();
  }
  for (std::size_t j : partition.minus) {
    if (j >= free) throw Error(ErrorCode::IndexOutOfRange, "gradient index " + std::to_string(j));
    g -= povm[j].matrix();
  }
  for (std::size_t j : partition.zero) {
    if (j >= free) throw Error(ErrorCode::IndexOutOfRange, "gradient index " + std::to_string(j));
  }
  GradientMatrix out{HermitianMatrix::hermitian_part(g), partition, 0.0};
  out.spectral_norm = spectral_norm(out.matrix);
  if (out.spectral_norm > 2.0 + tol::kGradientNorm) {
    throw Error(ErrorCode::ParameterOutOfRange,
                "gradient spectral norm " + std::to_string(out.spectral_norm) + " exceeds 2");
  }
  return out;
}

LearnerState LearnerState::initial(std::size_t dim, double eta) {
  if (!(eta > 0.0 && eta < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange, "eta must lie in (0, 1/2)");
  }
  return LearnerState{maximally_mixed(dim), HermitianMatrix::zero(dim), eta, 0};
}

DensityMatrix gibbs_state(const HermitianMatrix& gradient_sum, double eta) {
  const EigenDecomposition eig = hermitian_eig(gradient_sum);
  const double lowest = eig.eigenvalues(eig.eigenvalues.size() - 1);
  RVector w = (-eta * (eig.eigenvalues.array() - lowest)).exp().matrix();
  w /= w.sum();
  return make_density(HermitianMatrix::hermitian_part(EigenDecomposition{w, eig.eigenvectors}.reconstruct()));
}

double rftl_objective(const HermitianMatrix& gradient_sum, double eta, const DensityMatrix& phi) {
  const double linear = trace_product(gradient_sum.matrix(), phi.matrix()).real();
  const RVector ev = hermitian_eig(phi.hermitian()).eigenvalues;
  double neg_entropy = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > 0.0) neg_entropy += ev(k) * std::log(ev(k));
  }
  return eta * linear + neg_entropy;
}

LearnerState rftl_update(const LearnerState& state, const GradientMatrix& gradient) {
  if (gradient.matrix.dim() != state.hypothesis.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "gradient vs hypothesis");
  }
  LearnerState next = state;
  next.gradient_sum += gradient.matrix;
  next.hypothesis = gibbs_state(next.gradient_sum, next.eta);
  ++next.iteration;
  return next;
}

EtaChoice eta_for(std::size_t iterations, std::size_t dim) {
  const double t = static_cast<double>(std::max<std::size_t>(iterations, 1));
  const double raw = std::sqrt(std::log(static_cast<double>(std::max<std::size_t>(dim, 2))) / (8.0 * t));
  const double cap = std::nextafter(0.5, 0.0);
  if (raw >= 0.5) return EtaChoice{cap, raw, true};
  return EtaChoice{raw, raw, false};
}

double regret_bound(double eta, std::size_t updates, std::size_t dim) {
  return 8.0 * eta * static_cast<double>(updates) + std::log(static_cast<double>(dim)) / eta;
}

std::uint64_t bad_iteration_cap(std::size_t dim, double epsilon) {
  return static_cast<std::uint64_t>(
      std::ceil(512.0 * std::log(static_cast<double>(dim)) / (epsilon * epsilon)));
}

FeedbackPolicy exact_feedback() {
  return [](std::size_t, const Povm&, const DistVector& truth, Rng&) { return truth; };
}

OnlineRun run_online(const DensityMatrix& state, std::size_t rounds, const PovmSource& povms,
                     const FeedbackPolicy& feedback, double epsilon, const OnlineOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange, "epsilon must lie in (0, 1/2)");
  }
  const std::size_t d = state.dim();
  double eta = 0.0;
  if (options.eta) {
    eta = *options.eta;
  } else if (options.trigger == Trigger::Always) {
    eta = eta_for(rounds, d).value;
  } else {
    eta = eta_for(static_cast<std::size_t>(bad_iteration_cap(d, epsilon)), d).value;
  }
  const DensityMatrix& comparator = options.comparator ? *options.comparator : state;
  if (comparator.dim() != d) throw Error(ErrorCode::DimensionMismatch, "comparator dimension");

  OnlineRun run;
  run.final_state = LearnerState::initial(d, eta);
  run.report.comparator = options.comparator ? "supplied" : "rho";
  run.records.reserve(rounds);
  Rng rng(derive_seed(options.seed, 0, "online"));
  const bool exact_trigger = options.trigger != Trigger::ThresholdSearch;

  for (std::size_t t = 1; t <= rounds; ++t) {
    LearnerState& learner = run.final_state;
    const Povm povm = povms(t, learner.hypothesis);
    if (povm.dim() != d) throw Error(ErrorCode::DimensionMismatch, "round measurement dimension");

    IterationRecord rec;
    rec.t = t;
    rec.eta = eta;
    rec.prediction = outcome_distribution(povm, learner.hypothesis);
    const DistVector truth = outcome_distribution(povm, state);
    rec.tv_prediction_truth = tv_distance(rec.prediction, truth);

    switch (options.trigger) {
      case Trigger::Always: rec.bad = true; break;
      case Trigger::ExactTV: rec.bad = rec.tv_prediction_truth > 0.75 * epsilon; break;
      case Trigger::ThresholdSearch: {
        ThresholdInstance single{{povm}, {rec.prediction}, epsilon, options.search_delta};
        const ThresholdResult r = threshold_search(single, state, SearchMode::Sampled, rng);
        run.copies += r.honest.charged();
        rec.bad = r.verdict.violator;
        break;
      }
    }

    if (rec.bad) {
      DistVector b = feedback(t, povm, truth, rng);
      if (b.size() != truth.size()) throw Error(ErrorCode::LengthMismatch, "feedback length");
      if (exact_trigger && tv_distance(b, truth) > 0.25 * epsilon + tol::kKink) {
        throw Error(ErrorCode::FeedbackViolation,
                    "round " + std::to_string(t) + ": d_TV(b, p) = " +
                        std::to_string(tv_distance(b, truth)) + " > eps/4");
      }
      rec.loss = loss(rec.prediction, b);
      run.report.learner_loss += rec.loss;
      run.report.comparator_loss += loss(outcome_distribution(povm, comparator), b);
      rec.gradient = build_gradient(povm, subgradient_partition(rec.prediction, b));
      rec.feedback = std::move(b);
      learner = rftl_update(learner, *rec.gradient);
      ++run.report.updates;
    }

    const RVector ev = hermitian_eig(learner.hypothesis.hermitian()).eigenvalues;
    rec.hypothesis_min_eigenvalue = ev(ev.size() - 1);
    rec.hypothesis_trace_error = std::abs(learner.hypothesis.hermitian().trace() - 1.0);
    rec.regret_bound = regret_bound(eta, run.report.updates, d);
    run.records.push_back(std::move(rec));
  }

  run.report.iterations = rounds;
  run.report.regret = run.report.learner_loss - run.report.comparator_loss;
  run.report.bound = regret_bound(eta, run.report.updates, d);
  return run;
}

OnlineRun run_online(const DensityMatrix& state, const std::vector<Povm>& povms,
                     const FeedbackPolicy& feedback, double epsilon, const OnlineOptions& options) {
  return run_online(
      state, povms.size(),
      [&povms](std::size_t t, const DensityMatrix&) { return povms[t - 1]; }, feedback, epsilon,
      options);
}

}  // namespace povmshadow
