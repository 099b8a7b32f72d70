#include "suites.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "povmshadow/distributions.hpp"
#include "povmshadow/error.hpp"
#include "povmshadow/instances.hpp"
#include "povmshadow/io.hpp"
#include "povmshadow/lowerbound.hpp"
#include "povmshadow/online_learner.hpp"
#include "povmshadow/shadow.hpp"
#include "povmshadow/threshold_search.hpp"

namespace povmshadow::harness {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

template <typename... Ts>
std::string row(const Ts&... fields) {
  std::ostringstream os;
  os << kSchemaVersion;
  auto put = [&os](const auto& f) {
    os << ',';
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(f)>>) {
      os << fmt(f);
    } else if constexpr (std::is_same_v<std::decay_t<decltype(f)>, bool>) {
      os << (f ? 1 : 0);
    } else {
      os << f;
    }
  };
  (put(fields), ...);
  return os.str();
}

// Alternates Haar-projective and general POVMs (general only when K > d).
std::vector<Povm> measurement_family(std::size_t d, std::size_t k, std::size_t m, Rng& rng) {
  std::vector<Povm> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back(k <= d && i % 2 == 0 ? random_projective_povm(d, k, rng) : random_povm(d, k, rng));
  }
  return out;
}

struct Problem {
  DensityMatrix state;
  std::vector<Povm> povms;
  std::vector<DistVector> thresholds;  // empty unless loaded from a file
};

Problem load_or_generate(const ExperimentConfig& c, Rng& rng) {
  if (!c.instance.empty()) {
    io::LoadedInstance loaded = io::threshold_instance_from_json(io::read_json_file(c.instance));
    if (!loaded.state) throw Error(ErrorCode::MissingRequired, "instance file has no \"state\"");
    return {*loaded.state, std::move(loaded.instance.povms), std::move(loaded.instance.thresholds)};
  }
  Problem p;
  p.state = random_density(c.d, rng);
  p.povms = measurement_family(c.d, c.k, c.m, rng);
  return p;
}

// ---------------------------------------------------------------- estimate

TrialOutput estimate_trial(const ExperimentConfig& c, std::size_t trial, std::uint64_t seed) {
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(c.k);
  for (auto& x : w) x = expo(rng);
  double sum = 0.0;
  for (double x : w) sum += x;
  for (auto& x : w) x /= sum;
  const DistVector truth(std::move(w));
  const Estimate est = estimate_distribution(truth, c.epsilon, c.delta, rng);
  const double tv = tv_distance(est.distribution, truth);
  TrialOutput out;
  out.rows.push_back(row(trial, seed, c.k, est.copies, tv, tv >= c.epsilon));
  out.metrics = {{"failed", tv >= c.epsilon}, {"tv", tv}};
  return out;
}

bool estimate_summary(const ExperimentConfig& c, const std::vector<TrialOutput>& trials, json& s) {
  std::size_t failed = 0;
  std::size_t counted = 0;
  double max_tv = 0.0;
  for (const auto& t : trials) {
    if (t.status == "error") continue;
    ++counted;
    failed += t.metrics.at("failed").get<bool>();
    max_tv = std::max(max_tv, t.metrics.at("tv").get<double>());
  }
  const double rate = counted ? static_cast<double>(failed) / static_cast<double>(counted) : 1.0;
  s = {{"samples_per_trial", required_samples(c.k, c.epsilon, c.delta)},
       {"failure_rate", rate},
       {"max_tv", max_tv},
       {"allowed_rate", c.delta}};
  return rate <= c.delta;
}

// ---------------------------------------------------------------- threshold

TrialOutput threshold_trial(const ExperimentConfig& c, std::size_t trial, std::uint64_t seed) {
  Rng rng(seed);
  Problem p = load_or_generate(c, rng);
  std::vector<DistVector> truth;
  for (const auto& povm : p.povms) truth.push_back(outcome_distribution(povm, p.state));

  long planted = -1;
  ThresholdInstance inst{p.povms, p.thresholds, c.epsilon, c.delta};
  if (inst.thresholds.empty()) {
    inst.thresholds = truth;
    if (trial % 2 == 0) {
      planted = static_cast<long>(std::uniform_int_distribution<std::size_t>(0, p.povms.size() - 1)(rng));
      inst.thresholds[static_cast<std::size_t>(planted)] =
          perturb_at_tv(truth[static_cast<std::size_t>(planted)], 2.0 * c.epsilon);
    }
  }
  std::vector<double> exact_tv;
  for (std::size_t i = 0; i < truth.size(); ++i) exact_tv.push_back(tv_distance(truth[i], inst.thresholds[i]));
  const double max_tv = *std::max_element(exact_tv.begin(), exact_tv.end());

  const SearchMode mode = c.trigger == "oracle" ? SearchMode::Oracle : SearchMode::Sampled;
  const ThresholdResult r = threshold_search(inst, p.state, mode, rng, SearchOptions{c.c1});
  // Violator required when some TV > eps and then its index must be > 3eps/4;
  // AllClose required when every TV <= 3eps/4; the gap in between is free.
  bool correct = true;
  if (r.verdict.violator) {
    correct = exact_tv[r.verdict.index] > 0.75 * c.epsilon;
  } else {
    correct = max_tv <= c.epsilon;
  }
  TrialOutput out;
  out.rows.push_back(row(trial, seed, p.povms.size(), planted, r.verdict.violator ? "violator" : "all_close",
                         r.verdict.violator ? static_cast<long>(r.verdict.index) : -1L, correct,
                         r.quantum.charged(), r.honest.charged()));
  out.metrics = {{"correct", correct}};
  return out;
}

bool threshold_summary(const ExperimentConfig& c, const std::vector<TrialOutput>& trials, json& s) {
  std::size_t ok = 0;
  for (const auto& t : trials) ok += t.status != "error" && t.metrics.at("correct").get<bool>();
  const double n = static_cast<double>(trials.size());
  const double rate = static_cast<double>(ok) / n;
  const double floor = 1.0 - c.delta - 3.0 * std::sqrt(c.delta / n);
  s = {{"success_rate", rate}, {"required_rate", floor}};
  return rate >= floor;
}

// ---------------------------------------------------------------- regret

TrialOutput regret_trial(const ExperimentConfig& c, std::size_t trial, std::uint64_t seed) {
  Rng rng(seed);
  const DensityMatrix state = random_density(c.d, rng);
  OnlineOptions opts;
  opts.trigger = c.trigger == "always" ? Trigger::Always
                 : c.trigger == "exact" ? Trigger::ExactTV
                                        : Trigger::ThresholdSearch;
  opts.eta = c.eta;
  opts.seed = derive_seed(seed, 0, "learner");
  opts.search_delta = c.delta;
  const OnlineRun run = run_online(state, c.t, adversarial_source(state, c.k, derive_seed(seed, 0, "family")),
                                   exact_feedback(), c.epsilon, opts);
  TrialOutput out;
  double worst_invariant = 0.0;
  std::size_t bad = 0;
  for (const auto& r : run.records) {
    out.rows.push_back(row(trial, r.t, r.loss, r.tv_prediction_truth, r.bad, r.eta, r.regret_bound));
    worst_invariant = std::max({worst_invariant, r.hypothesis_trace_error, -r.hypothesis_min_eigenvalue});
    bad += r.bad;
  }
  const auto cap = bad_iteration_cap(c.d, c.epsilon);
  const bool regret_ok = run.report.regret <= run.report.bound;
  const bool cap_ok = opts.trigger == Trigger::Always || bad <= cap;
  if (!regret_ok || !cap_ok || worst_invariant > 1e-9) out.status = "fail";
  out.metrics = {{"regret", run.report.regret}, {"bound", run.report.bound}, {"bad", bad},
                 {"cap", cap}, {"invariant", worst_invariant}};
  return out;
}

bool regret_summary(const ExperimentConfig&, const std::vector<TrialOutput>& trials, json& s) {
  double worst_ratio = 0.0;
  std::size_t max_bad = 0;
  double worst_invariant = 0.0;
  bool pass = true;
  for (const auto& t : trials) {
    if (t.status != "ok") pass = false;
    if (t.status == "error") continue;
    worst_ratio = std::max(worst_ratio, t.metrics.at("regret").get<double>() / t.metrics.at("bound").get<double>());
    max_bad = std::max(max_bad, t.metrics.at("bad").get<std::size_t>());
    worst_invariant = std::max(worst_invariant, t.metrics.at("invariant").get<double>());
  }
  s = {{"max_regret_over_bound", worst_ratio}, {"max_bad_iterations", max_bad},
       {"max_invariant_error", worst_invariant}};
  return pass;
}

// ---------------------------------------------------------------- shadow

TrialOutput shadow_trial(const ExperimentConfig& c, std::size_t trial, std::uint64_t seed) {
  Rng rng(seed);
  const Problem p = load_or_generate(c, rng);
  ShadowConfig sc;
  sc.epsilon = c.epsilon;
  sc.delta = c.delta;
  sc.c0 = c.c0;
  sc.c1 = c.c1;
  sc.c2 = c.c2;
  sc.trigger = c.trigger == "oracle" ? SearchMode::Oracle : SearchMode::Sampled;
  sc.nb_log_m_squared = c.nb_log_m_squared;
  sc.eta = c.eta;
  const ShadowResult r = run_shadow(p.state, p.povms, sc, rng);
  const bool ledger_exact = r.quantum.charged() == r.rounds * (r.plan.n0 + r.plan.nb);
  TrialOutput out;
  out.rows.push_back(row(trial, seed, r.verified, r.max_tv_to_truth, r.bad_iterations, r.rounds,
                         r.quantum.charged(), r.honest.charged(), r.certified, r.budget_exhausted,
                         ledger_exact));
  if (!ledger_exact) out.status = "fail";
  out.metrics = {{"success", r.verified}, {"ledger_exact", ledger_exact}, {"bad", r.bad_iterations},
                 {"max_tv", r.max_tv_to_truth}};
  out.artifact = io::shadow_result_to_json(r, seed);
  return out;
}

bool shadow_summary(const ExperimentConfig& c, const std::vector<TrialOutput>& trials, json& s) {
  std::size_t ok = 0;
  std::size_t max_bad = 0;
  bool ledgers = true;
  for (const auto& t : trials) {
    if (t.status == "error") {
      ledgers = false;
      continue;
    }
    ok += t.metrics.at("success").get<bool>();
    ledgers = ledgers && t.metrics.at("ledger_exact").get<bool>();
    max_bad = std::max(max_bad, t.metrics.at("bad").get<std::size_t>());
  }
  const double rate = static_cast<double>(ok) / static_cast<double>(trials.size());
  s = {{"success_rate", rate}, {"required_rate", 1.0 - c.delta}, {"ledgers_exact", ledgers},
       {"max_bad_iterations", max_bad}};
  return ledgers && rate >= 1.0 - c.delta;
}

// ---------------------------------------------------------------- lowerbound

TrialOutput lowerbound_trial(const ExperimentConfig& c, std::size_t trial, std::uint64_t seed) {
  Rng rng(seed);
  const PackingNet net = build_packing_net(c.d, c.k, c.l, c.epsilon, c.max_retries, rng);
  const SeparationReport sep = verify_separation(net, rng);

  const auto index = std::uniform_int_distribution<std::size_t>(0, net.size() - 1)(rng);
  std::vector<int> z(c.k / 2);
  for (auto& v : z) v = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
  const HardInstance inst = hard_state(net, index, z);

  const RVector ev = hermitian_eig(inst.state.hermitian()).eigenvalues;
  const double dd = static_cast<double>(c.d);
  double spectrum_error = 0.0;
  for (Eigen::Index j = 0; j < ev.size(); ++j) {
    const double want = (j < ev.size() / 2 ? 1.0 + 50.0 * c.epsilon : 1.0 - 50.0 * c.epsilon) / dd;
    spectrum_error = std::max(spectrum_error, std::abs(ev(j) - want));
  }
  const auto copies = static_cast<std::uint64_t>(
      std::ceil(required_copies_lower(dd, static_cast<double>(c.k), static_cast<double>(c.l), c.epsilon)));
  const InfoReport info = info_report(inst, copies, c.l, c.k);
  const double expected = expected_entropy_deficit(c.epsilon);

  long decoded = -1;
  if (c.decode_accuracy > 0.0) {
    std::vector<Povm> povms;
    for (const auto& part : net.partitions) povms.push_back(part.povm);
    ShadowConfig sc;
    sc.epsilon = c.decode_accuracy;
    sc.delta = c.delta;
    sc.c0 = c.c0;
    sc.c1 = c.c1;
    sc.c2 = c.c2;
    sc.eta = c.eta;
    decoded = static_cast<long>(decode_planted_index(run_shadow(inst.state, povms, sc, rng).outputs));
  }

  const bool pass = sep.max_planted_entry_error <= 1e-10 && sep.cross_entries_in_band &&
                    (net.size() < 2 || sep.min_cross_tv >= sep.cross_tv_floor - 1e-9) &&
                    sep.max_same_index_tv_error <= 1e-9 && spectrum_error <= 1e-9 &&
                    std::abs(info.deficit_bits - expected) <= 1e-9 &&
                    (decoded < 0 || static_cast<std::size_t>(decoded) == index);
  TrialOutput out;
  out.rows.push_back(row(trial, seed, net.retries, net.worst_deviation, sep.min_cross_tv,
                         sep.cross_tv_floor, sep.max_planted_entry_error, sep.cross_entries_in_band,
                         sep.max_same_index_tv_error, sep.full_flip_tv, spectrum_error,
                         info.deficit_bits, expected, info.budget_bits, info.target_bits,
                         index, decoded, pass));
  if (!pass) out.status = "fail";
  out.metrics = {{"retries", net.retries}, {"min_cross_tv", sep.min_cross_tv}};
  out.artifact = io::hard_instance_to_json(net, inst, seed);
  return out;
}

bool lowerbound_summary(const ExperimentConfig&, const std::vector<TrialOutput>& trials, json& s) {
  std::size_t max_retries = 0;
  double min_tv = 1.0;
  bool pass = true;
  for (const auto& t : trials) {
    if (t.status != "ok") pass = false;
    if (t.status == "error") continue;
    max_retries = std::max(max_retries, t.metrics.at("retries").get<std::size_t>());
    min_tv = std::min(min_tv, t.metrics.at("min_cross_tv").get<double>());
  }
  s = {{"max_retries_used", max_retries}, {"min_cross_tv", min_tv}};
  return pass;
}

// ---------------------------------------------------------------- kscaling

TrialOutput kscaling_trial(const ExperimentConfig& c, std::size_t trial, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t k = c.k_values.at(trial);
  const DensityMatrix state = random_density(c.d, rng);
  const std::vector<Povm> povms = measurement_family(c.d, k, c.m, rng);

  // Estimation: copies actually drawn by estimate_distribution.
  const std::uint64_t estimate_copies =
      estimate_distribution(povms.front(), state, c.epsilon, c.delta, rng).copies;
  // Threshold search on an all-close instance: every event-B check runs.
  std::vector<DistVector> truth;
  for (const auto& p : povms) truth.push_back(outcome_distribution(p, state));
  const ThresholdInstance inst{povms, truth, c.epsilon, c.delta};
  const ThresholdResult r = threshold_search(inst, state, SearchMode::Sampled, rng, SearchOptions{c.c1});

  ShadowConfig sc;
  sc.epsilon = c.epsilon;
  sc.delta = c.delta;
  sc.c0 = c.c0;
  sc.c1 = c.c1;
  sc.c2 = c.c2;
  sc.nb_log_m_squared = c.nb_log_m_squared;
  const BatchPlan plan = plan_batches(sc, c.d, k, c.m);

  TrialOutput out;
  out.rows.push_back(row(trial, k, estimate_copies, r.quantum.charged(), r.honest.charged(), plan.n0,
                         plan.nb));
  out.metrics = {{"K", k},
                 {"estimate", estimate_copies},
                 {"threshold_quantum", r.quantum.charged()},
                 {"threshold_honest", r.honest.charged()},
                 {"n0", plan.n0},
                 {"nb", plan.nb}};
  return out;
}

bool kscaling_summary(const ExperimentConfig&, const std::vector<TrialOutput>& trials, json& s) {
  bool pass = true;
  json ratios = json::object();
  json slopes = json::object();
  for (const char* col : {"estimate", "threshold_quantum", "threshold_honest", "n0", "nb"}) {
    json list = json::array();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (trials[i].status == "error") {
        pass = false;
        continue;
      }
      const double k = trials[i].metrics.at("K").get<double>();
      const double y = trials[i].metrics.at(col).get<double>();
      sx += std::log(k);
      sy += std::log(y);
      sxx += std::log(k) * std::log(k);
      sxy += std::log(k) * std::log(y);
      ++n;
      if (i == 0 || trials[i - 1].status == "error") continue;
      const double k0 = trials[i - 1].metrics.at("K").get<double>();
      const double y0 = trials[i - 1].metrics.at(col).get<double>();
      // copies(K') / copies(K) normalised by K'/K; 1 means exactly linear.
      const double normalised = (y / y0) / (k / k0);
      list.push_back(normalised);
      if (normalised < 0.85 || normalised > 1.15) pass = false;  // doubling within 15%
    }
    ratios[col] = list;
    const double nn = static_cast<double>(n);
    slopes[col] = n >= 2 ? (nn * sxy - sx * sy) / (nn * sxx - sx * sx) : 0.0;
  }
  s = {{"normalised_ratios", ratios}, {"loglog_slopes", slopes}};
  return pass;
}

}  // namespace

const Suite& suite_for(const std::string& name) {
  static const Suite estimate{"schema_version,trial,seed,K,samples,tv,failed", estimate_trial,
                              estimate_summary, nullptr};
  static const Suite threshold{
      "schema_version,trial,seed,M,planted,verdict,index,correct,quantum_copies,honest_copies",
      threshold_trial, threshold_summary, nullptr};
  static const Suite regret{"schema_version,trial,t,loss,tv_prediction_truth,bad_flag,eta,regret_bound",
                            regret_trial, regret_summary, nullptr};
  static const Suite shadow{
      "schema_version,trial,seed,success,max_tv,bad_iterations,batches,quantum_copies,honest_copies,"
      "certified,budget_exhausted,ledger_exact",
      shadow_trial, shadow_summary, "shadow_results.json"};
  static const Suite lowerbound{
      "schema_version,trial,seed,retries,worst_overlap_deviation,min_cross_tv,cross_tv_floor,"
      "planted_entry_error,cross_in_band,same_index_tv_error,full_flip_tv,spectrum_error,"
      "deficit_bits,expected_deficit_bits,budget_bits,target_bits,planted_index,decoded_index,pass",
      lowerbound_trial, lowerbound_summary, "instances.json"};
  static const Suite kscaling{
      "schema_version,k_index,K,estimate_copies,threshold_quantum_copies,threshold_honest_copies,"
      "shadow_n0,shadow_nb",
      kscaling_trial, kscaling_summary, nullptr};
  if (name == "estimate") return estimate;
  if (name == "threshold") return threshold;
  if (name == "regret") return regret;
  if (name == "shadow") return shadow;
  if (name == "lowerbound") return lowerbound;
  if (name == "kscaling") return kscaling;
  throw Error(ErrorCode::OutOfRange, "suite=" + name + " (unknown suite)");
}

}  // namespace povmshadow::harness
