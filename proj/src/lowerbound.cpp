#include "povmshadow/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "povmshadow/distributions.hpp"
#include "povmshadow/error.hpp"

namespace povmshadow {

namespace {

void check_shape(std::size_t dim, std::size_t blocks) {
  if (blocks < 2 || blocks % 2 != 0 || dim % blocks != 0) {
    throw Error(ErrorCode::BadDimensions, "need even K dividing D (D=" + std::to_string(dim) +
                                              ", K=" + std::to_string(blocks) + ")");
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && 50.0 * epsilon < 1.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "need 0 < 50 eps < 1");
  }
}

// Number of cross pairs (j, j') of partition a against b that violate the
// overlap condition, and the worst deviation among all of them.
struct PairCheck {
  std::size_t violations = 0;
  double worst = 0.0;
};

PairCheck check_pair(const SubspacePartition& a, const SubspacePartition& b) {
  const double k = static_cast<double>(a.blocks);
  const double scale = k / static_cast<double>(a.dim);
  const double bound = 1.0 / (2.0 * k);
  PairCheck out;
  for (std::size_t j = 0; j < a.blocks; ++j) {
    const CMatrix qa = a.block(j);
    for (std::size_t jj = 0; jj < b.blocks; ++jj) {
      // Tr(P Q Q^dagger K/D) = (K/D) ||Q_a^dagger Q_b||_F^2
      const double overlap = scale * (qa.adjoint() * b.block(jj)).squaredNorm();
      const double dev = std::abs(overlap - 1.0 / k);
      out.worst = std::max(out.worst, dev);
      if (dev > bound) ++out.violations;
    }
  }
  return out;
}

std::vector<std::vector<int>> sign_strings(std::size_t half, std::size_t max_strings, Rng& rng) {
  std::vector<std::vector<int>> out;
  if (half < 63 && (std::uint64_t{1} << half) <= max_strings) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << half); ++mask) {
      std::vector<int> z(half);
      for (std::size_t j = 0; j < half; ++j) z[j] = (mask >> j) & 1U ? -1 : 1;
      out.push_back(std::move(z));
    }
    return out;
  }
  std::bernoulli_distribution coin(0.5);
  for (std::size_t s = 0; s < max_strings; ++s) {
    std::vector<int> z(half);
    for (auto& v : z) v = coin(rng) ? 1 : -1;
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace

CMatrix SubspacePartition::block(std::size_t j) const {
  const auto r = static_cast<Eigen::Index>(rank());
  return basis.middleCols(static_cast<Eigen::Index>(j) * r, r);
}

SubspacePartition haar_partition(std::size_t dim, std::size_t blocks, Rng& rng) {
  check_shape(dim, blocks);
  SubspacePartition out;
  out.dim = dim;
  out.blocks = blocks;
  out.basis = haar_unitary(dim, rng);
  std::vector<QuantumEvent> events;
  events.reserve(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    const CMatrix q = out.block(j);
    events.emplace_back(HermitianMatrix::hermitian_part(q * q.adjoint()));
  }
  out.povm = Povm(std::move(events));
  return out;
}

double worst_overlap_deviation(const std::vector<SubspacePartition>& partitions) {
  double worst = 0.0;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    for (std::size_t ii = i + 1; ii < partitions.size(); ++ii) {
      worst = std::max(worst, check_pair(partitions[i], partitions[ii]).worst);
    }
  }
  return worst;
}

PackingNet build_packing_net(std::size_t dim, std::size_t blocks, std::size_t count,
                             double epsilon, std::size_t max_retries, Rng& rng) {
  check_shape(dim, blocks);
  check_epsilon(epsilon);
  if (count < 1) throw Error(ErrorCode::ParameterOutOfRange, "need L >= 1");

  PackingNet net;
  net.dim = dim;
  net.blocks = blocks;
  net.epsilon = epsilon;
  net.partitions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) net.partitions.push_back(haar_partition(dim, blocks, rng));

  while (true) {
    // Overlap deviation is symmetric in (i, i') up to the j <-> j' swap.
    std::vector<std::size_t> violations(count, 0);
    double worst = 0.0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t ii = i + 1; ii < count; ++ii) {
        const PairCheck c = check_pair(net.partitions[i], net.partitions[ii]);
        violations[i] += c.violations;
        violations[ii] += c.violations;
        total += c.violations;
        worst = std::max(worst, c.worst);
      }
    }
    net.worst_deviation = worst;
    if (total == 0) return net;
    if (net.retries >= max_retries) {
      throw Error(ErrorCode::RetriesExhausted,
                  "overlap condition still violated after " + std::to_string(max_retries) +
                      " redraws; worst |Tr(P rho') - 1/K| = " + std::to_string(worst) +
                      " > " + std::to_string(1.0 / (2.0 * static_cast<double>(blocks))));
    }
    const auto redraw = static_cast<std::size_t>(
        std::max_element(violations.begin(), violations.end()) - violations.begin());
    net.partitions[redraw] = haar_partition(dim, blocks, rng);
    ++net.retries;
  }
}

DistVector planted_distribution(std::size_t blocks, double epsilon, const std::vector<int>& signs) {
  if (signs.size() * 2 != blocks) {
    throw Error(ErrorCode::BadString, "sign string length " + std::to_string(signs.size()) +
                                          ", need K/2 = " + std::to_string(blocks / 2));
  }
  const double k = static_cast<double>(blocks);
  std::vector<double> p(blocks);
  for (std::size_t j = 0; j < signs.size(); ++j) {
    if (signs[j] != 1 && signs[j] != -1) {
      throw Error(ErrorCode::BadString, "sign entry " + std::to_string(j) + " is not +-1");
    }
    p[2 * j] = (1.0 - 50.0 * epsilon * signs[j]) / k;
    p[2 * j + 1] = (1.0 + 50.0 * epsilon * signs[j]) / k;
  }
  return DistVector(std::move(p));
}

HardInstance hard_state(const PackingNet& net, std::size_t index, const std::vector<int>& signs) {
  if (index >= net.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(index) + " of " + std::to_string(net.size()));
  }
  check_epsilon(net.epsilon);
  const DistVector coef = planted_distribution(net.blocks, net.epsilon, signs);
  const SubspacePartition& part = net.partitions[index];
  // rho_{i,j} = K P_{i,j} / D, so block j carries eigenvalue coef_j K / D.
  const double scale = static_cast<double>(net.blocks) / static_cast<double>(net.dim);
  const auto d = static_cast<Eigen::Index>(net.dim);
  CMatrix rho = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < net.blocks; ++j) rho += (coef[j] * scale) * part.projector(j);
  return HardInstance{index, signs, net.epsilon, make_density(HermitianMatrix::hermitian_part(rho))};
}

SeparationReport verify_separation(const PackingNet& net, Rng& rng, std::size_t max_strings) {
  SeparationReport report;
  const std::size_t l = net.size();
  const double k = static_cast<double>(net.blocks);
  const double eps = net.epsilon;
  report.cross_tv_floor = 25.0 * eps / 2.0;
  const double band_lo = (1.0 - 25.0 * eps) / k;
  const double band_hi = (1.0 + 25.0 * eps) / k;

  const auto strings = sign_strings(net.blocks / 2, std::max<std::size_t>(max_strings, 1), rng);
  report.strings_tested = strings.size();

  // dist[m][i][s]: measurement m applied to rho_i(strings[s]).
  std::vector<std::vector<std::vector<DistVector>>> dist(
      l, std::vector<std::vector<DistVector>>(l, std::vector<DistVector>(strings.size())));
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t s = 0; s < strings.size(); ++s) {
      const HardInstance inst = hard_state(net, i, strings[s]);
      for (std::size_t m = 0; m < l; ++m) {
        dist[m][i][s] = outcome_distribution(net.partitions[m].povm, inst.state);
      }
    }
  }

  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t s = 0; s < strings.size(); ++s) {
      const DistVector exact = planted_distribution(net.blocks, eps, strings[s]);
      for (std::size_t j = 0; j < net.blocks; ++j) {
        report.max_planted_entry_error =
            std::max(report.max_planted_entry_error, std::abs(dist[i][i][s][j] - exact[j]));
      }
      for (std::size_t m = 0; m < l; ++m) {
        if (m == i) continue;
        for (double v : dist[m][i][s]) {
          report.cross_entry_min = std::min(report.cross_entry_min, v);
          report.cross_entry_max = std::max(report.cross_entry_max, v);
          if (v < band_lo - 1e-12 || v > band_hi + 1e-12) report.cross_entries_in_band = false;
        }
      }
    }
  }

  // (c): measurement i separates rho_i(z) from every rho_{i'}(z').
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t ii = 0; ii < l; ++ii) {
      if (ii == i) continue;
      for (std::size_t s = 0; s < strings.size(); ++s) {
        for (std::size_t ss = 0; ss < strings.size(); ++ss) {
          report.min_cross_tv =
              std::min(report.min_cross_tv, tv_distance(dist[i][i][s], dist[i][ii][ss]));
          ++report.tuples_tested;
        }
      }
    }
  }
  if (report.tuples_tested == 0) report.min_cross_tv = 0.0;

  // (d): each differing sign moves two entries by 100 eps / K, i.e. TV by 100 eps / K.
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t s = 0; s < strings.size(); ++s) {
      for (std::size_t ss = 0; ss < strings.size(); ++ss) {
        std::size_t flips = 0;
        for (std::size_t j = 0; j < strings[s].size(); ++j) flips += strings[s][j] != strings[ss][j];
        const double expected = static_cast<double>(flips) * 100.0 * eps / k;
        report.max_same_index_tv_error = std::max(
            report.max_same_index_tv_error,
            std::abs(tv_distance(dist[i][i][s], dist[i][i][ss]) - expected));
      }
    }
  }
  std::vector<int> z(net.blocks / 2, 1);
  std::vector<int> neg(net.blocks / 2, -1);
  report.full_flip_tv = tv_distance(outcome_distribution(net.partitions[0].povm, hard_state(net, 0, z).state),
                                    outcome_distribution(net.partitions[0].povm, hard_state(net, 0, neg).state));
  return report;
}

double expected_entropy_deficit(double epsilon) {
  const double x = 50.0 * epsilon;
  // 1 - H2((1 + x)/2) = [(1 + x) ln(1 + x) + (1 - x) ln(1 - x)] / (2 ln 2)
  const double neg = x < 1.0 ? (1.0 - x) * std::log1p(-x) : 0.0;
  return ((1.0 + x) * std::log1p(x) + neg) / (2.0 * std::log(2.0));
}

InfoReport info_report(const HardInstance& instance, std::uint64_t copies, std::size_t count,
                       std::size_t blocks) {
  InfoReport r;
  r.entropy_bits = von_neumann_entropy(instance.state);
  r.deficit_bits = std::max(0.0, std::log2(static_cast<double>(instance.state.dim())) - r.entropy_bits);
  r.budget_bits = static_cast<double>(copies) * r.deficit_bits;
  r.target_bits = static_cast<double>(blocks) / 2.0 +
                  std::log2(static_cast<double>(std::max<std::size_t>(count, 1)));
  r.feasible = r.budget_bits >= r.target_bits;
  return r;
}

double required_copies_lower(double dim, double outcomes, double measurements, double epsilon) {
  if (!(dim > 0.0 && outcomes > 0.0 && measurements > 0.0 && epsilon > 0.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "arguments must be positive");
  }
  return std::min(dim * dim, outcomes + std::log2(measurements)) / (epsilon * epsilon);
}

std::size_t decode_planted_index(const std::vector<DistVector>& outputs) {
  if (outputs.empty()) throw Error(ErrorCode::EmptyInstance, "no outputs to decode");
  std::size_t best = 0;
  double best_tv = -1.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const double tv = tv_distance(outputs[i], DistVector::uniform(outputs[i].size()));
    if (tv > best_tv) {
      best_tv = tv;
      best = i;
    }
  }
  return best;
}

}  // namespace povmshadow
