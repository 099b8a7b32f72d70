#include "povmshadow/io.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "povmshadow/error.hpp"

namespace povmshadow::io {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::Parse, std::string("missing key \"") + key + "\"");
  }
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

Json net_metadata(const PackingNet& net, std::uint64_t seed) {
  return Json{{"D", net.dim}, {"K", net.blocks}, {"L", net.size()},
              {"epsilon", net.epsilon}, {"seed", seed}};
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  std::vector<double> re;
  std::vector<double> im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return Json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const Json& j) {
  const auto dim = get_as<std::size_t>(require(j, "dim"), "dim");
  const auto re = get_as<std::vector<double>>(require(j, "re"), "re");
  const auto im = j.contains("im") ? get_as<std::vector<double>>(j.at("im"), "im")
                                   : std::vector<double>(re.size(), 0.0);
  if (dim == 0 || re.size() != dim * dim || im.size() != dim * dim) {
    throw Error(ErrorCode::BadDimensions,
                "matrix of dim " + std::to_string(dim) + " needs " + std::to_string(dim * dim) +
                    " entries per array");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto k = static_cast<std::size_t>(r * n + c);
      m(r, c) = Complex(re[k], im[k]);
    }
  }
  return m;
}

Json dist_to_json(const DistVector& p) { return Json(p.vec()); }

DistVector dist_from_json(const Json& j) {
  return DistVector(get_as<std::vector<double>>(j, "distribution"));
}

Json threshold_instance_to_json(const ThresholdInstance& instance,
                                const std::optional<DensityMatrix>& state) {
  Json povms = Json::array();
  for (const auto& p : instance.povms) {
    Json events = Json::array();
    for (const auto& e : p.events()) events.push_back(matrix_to_json(e.matrix()));
    povms.push_back(std::move(events));
  }
  Json thresholds = Json::array();
  for (const auto& t : instance.thresholds) thresholds.push_back(dist_to_json(t));
  Json out{{"epsilon", instance.epsilon}, {"delta", instance.delta},
           {"povms", std::move(povms)}, {"thresholds", std::move(thresholds)}};
  if (state) out["state"] = matrix_to_json(state->matrix());
  return out;
}

LoadedInstance threshold_instance_from_json(const Json& j) {
  LoadedInstance out;
  out.instance.epsilon = j.contains("epsilon") ? get_as<double>(j.at("epsilon"), "epsilon") : 0.1;
  out.instance.delta = j.contains("delta") ? get_as<double>(j.at("delta"), "delta") : 0.05;
  const Json& povms = require(j, "povms");
  if (!povms.is_array()) throw Error(ErrorCode::Parse, "\"povms\" must be an array");
  for (const auto& p : povms) {
    if (!p.is_array()) throw Error(ErrorCode::Parse, "each POVM must be an array of matrices");
    std::vector<QuantumEvent> events;
    for (const auto& e : p) events.emplace_back(HermitianMatrix(matrix_from_json(e)));
    out.instance.povms.emplace_back(std::move(events));
  }
  if (j.contains("thresholds")) {
    for (const auto& t : j.at("thresholds")) out.instance.thresholds.push_back(dist_from_json(t));
  } else {
    for (const auto& p : out.instance.povms) out.instance.thresholds.push_back(DistVector::uniform(p.outcomes()));
  }
  if (j.contains("state")) out.state = make_density(HermitianMatrix(matrix_from_json(j.at("state"))));
  out.instance.validate();
  return out;
}

Json shadow_result_to_json(const ShadowResult& result, std::uint64_t seed) {
  Json b = Json::array();
  for (const auto& o : result.outputs) b.push_back(dist_to_json(o));
  Json copies{{"quantum_budget", result.quantum.charged()},
              {"classical_honest", result.honest.charged()},
              {"per_batch", result.plan.n0 + result.plan.nb},
              {"n0", result.plan.n0},
              {"nb", result.plan.nb},
              {"t0", result.plan.t0},
              {"batches_used", result.rounds}};
  return Json{{"b", std::move(b)},
              {"bad_iterations", result.bad_iterations},
              {"copies", std::move(copies)},
              {"success", result.verified},
              {"certified", result.certified},
              {"budget_exhausted", result.budget_exhausted},
              {"max_tv", result.max_tv_to_truth},
              {"seed", seed}};
}

Json packing_net_to_json(const PackingNet& net, std::uint64_t seed) {
  Json out = net_metadata(net, seed);
  Json parts = Json::array();
  for (const auto& p : net.partitions) parts.push_back(matrix_to_json(p.basis));
  out["partitions"] = std::move(parts);
  out["retries"] = net.retries;
  out["worst_deviation"] = net.worst_deviation;
  return out;
}

PackingNet packing_net_from_json(const Json& j) {
  PackingNet net;
  net.dim = get_as<std::size_t>(require(j, "D"), "D");
  net.blocks = get_as<std::size_t>(require(j, "K"), "K");
  net.epsilon = get_as<double>(require(j, "epsilon"), "epsilon");
  const auto count = get_as<std::size_t>(require(j, "L"), "L");
  const Json& parts = require(j, "partitions");
  if (!parts.is_array() || parts.size() != count) {
    throw Error(ErrorCode::Parse, "\"partitions\" must hold L matrices");
  }
  if (net.blocks < 2 || net.blocks % 2 != 0 || net.dim % net.blocks != 0) {
    throw Error(ErrorCode::BadDimensions, "need even K dividing D");
  }
  for (const auto& m : parts) {
    SubspacePartition p;
    p.dim = net.dim;
    p.blocks = net.blocks;
    p.basis = matrix_from_json(m);
    if (p.dim != static_cast<std::size_t>(p.basis.rows())) {
      throw Error(ErrorCode::BadDimensions, "partition basis dimension differs from D");
    }
    std::vector<QuantumEvent> events;
    for (std::size_t b = 0; b < p.blocks; ++b) {
      const CMatrix q = p.block(b);
      events.emplace_back(HermitianMatrix::hermitian_part(q * q.adjoint()));
    }
    p.povm = Povm(std::move(events));
    net.partitions.push_back(std::move(p));
  }
  net.worst_deviation = worst_overlap_deviation(net.partitions);
  return net;
}

Json hard_instance_to_json(const PackingNet& net, const HardInstance& instance, std::uint64_t seed) {
  Json out = net_metadata(net, seed);
  out["index"] = instance.index;
  out["signs"] = instance.signs;
  out["state"] = matrix_to_json(instance.state.matrix());
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace povmshadow::io
