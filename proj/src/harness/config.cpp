#include <algorithm>
#include <charconv>
#include <sstream>
#include <string>

#include "povmshadow/error.hpp"
#include "povmshadow/harness.hpp"
#include "povmshadow/random.hpp"

namespace povmshadow::harness {

namespace {

const std::vector<std::string> kKeys = {
    "suite", "seed", "trials", "workers", "out", "d", "K", "M", "T", "L", "epsilon", "delta",
    "c0", "c1", "c2", "eta", "trigger", "nb_log_m_squared", "instance", "max_retries", "k_values",
    "decode_accuracy"};

std::map<std::string, std::string> suite_defaults(const std::string& suite) {
  if (suite == "estimate") {
    return {{"K", "8"}, {"epsilon", "0.1"}, {"delta", "0.05"}, {"trials", "2000"}};
  }
  if (suite == "threshold") {
    return {{"d", "4"}, {"K", "4"}, {"M", "32"}, {"epsilon", "0.1"}, {"delta", "0.05"},
            {"trials", "500"}, {"trigger", "sampled"}};
  }
  if (suite == "regret") {
    return {{"d", "8"}, {"K", "4"}, {"T", "500"}, {"epsilon", "0.2"}, {"trials", "10"},
            {"trigger", "always"}};
  }
  if (suite == "shadow") {
    return {{"d", "8"}, {"K", "4"}, {"M", "20"}, {"epsilon", "0.15"}, {"delta", "0.1"},
            {"trials", "200"}, {"trigger", "sampled"}};
  }
  if (suite == "lowerbound") {
    return {{"d", "16"}, {"K", "4"}, {"L", "8"}, {"epsilon", "0.01"}, {"trials", "20"}};
  }
  // kscaling
  return {{"d", "8"}, {"M", "20"}, {"epsilon", "0.1"}, {"delta", "0.05"}};
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void out_of_range(const std::string& key, const std::string& value, const char* need) {
  throw Error(ErrorCode::OutOfRange, key + "=" + value + " (" + need + ")");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) out_of_range(key, value, "not a number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  out_of_range(key, value, "expected true or false");
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<std::size_t>(key, trim(item)));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const std::string& key, const std::string& value, const char* why) {
    if (!ok) out_of_range(key, value, why);
  };
  const auto eps = format_double(c.epsilon);
  const auto del = format_double(c.delta);
  need(c.trials >= 1, "trials", std::to_string(c.trials), "need >= 1");
  need(c.workers >= 1 && c.workers <= 256, "workers", std::to_string(c.workers), "need 1..256");
  need(c.epsilon > 0.0 && c.epsilon < 0.5, "epsilon", eps, "need 0 < eps < 1/2");
  need(c.delta > 0.0 && c.delta < 0.5, "delta", del, "need 0 < delta < 1/2");
  need(c.c0 > 0.0, "c0", format_double(c.c0), "need > 0");
  need(c.c1 > 0.0, "c1", format_double(c.c1), "need > 0");
  need(c.c2 > 0.0, "c2", format_double(c.c2), "need > 0");
  if (c.eta) need(*c.eta > 0.0 && *c.eta < 0.5, "eta", format_double(*c.eta), "need 0 < eta < 1/2");

  const auto& s = c.suite;
  if (s == "estimate") {
    need(c.k >= 2, "K", std::to_string(c.k), "need >= 2");
  } else if (s == "threshold" || s == "shadow") {
    need(c.d >= 2 && c.d <= 1024, "d", std::to_string(c.d), "need 2..1024");
    need(c.k >= 2, "K", std::to_string(c.k), "need >= 2");
    need(c.m >= 1, "M", std::to_string(c.m), "need >= 1");
    need(c.trigger == "oracle" || c.trigger == "sampled", "trigger", c.trigger, "oracle or sampled");
  } else if (s == "regret") {
    need(c.d >= 2 && c.d <= 1024, "d", std::to_string(c.d), "need 2..1024");
    need(c.k >= 2 && c.k <= c.d, "K", std::to_string(c.k), "need 2 <= K <= d");
    need(c.t >= 1, "T", std::to_string(c.t), "need >= 1");
    need(c.trigger == "always" || c.trigger == "exact" || c.trigger == "search", "trigger",
         c.trigger, "always, exact or search");
  } else if (s == "lowerbound") {
    need(c.k >= 2 && c.k % 2 == 0, "K", std::to_string(c.k), "need even K >= 2");
    need(c.d >= c.k && c.d % c.k == 0 && c.d <= 1024, "d", std::to_string(c.d),
         "need K | d, d <= 1024");
    need(c.l >= 1, "L", std::to_string(c.l), "need >= 1");
    need(50.0 * c.epsilon < 1.0, "epsilon", eps, "need 50 eps < 1");
    need(c.decode_accuracy >= 0.0 && c.decode_accuracy < 0.5, "decode_accuracy",
         format_double(c.decode_accuracy), "need 0 <= eps' < 1/2");
  } else if (s == "kscaling") {
    need(c.d >= 2 && c.d <= 1024, "d", std::to_string(c.d), "need 2..1024");
    need(c.m >= 1, "M", std::to_string(c.m), "need >= 1");
    need(c.k_values.size() >= 2, "k_values", std::to_string(c.k_values.size()) + " values",
         "need at least two");
    for (auto k : c.k_values) need(k >= 2, "k_values", std::to_string(k), "each K >= 2");
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"estimate", "threshold", "regret",
                                                 "shadow",   "lowerbound", "kscaling"};
  return names;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos || trim(body.substr(0, eq)).empty()) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected key = value");
    }
    out[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return out;
}

ExperimentConfig parse_config(std::string_view file_text,
                              const std::map<std::string, std::string>& flags) {
  const auto file = parse_key_values(file_text);
  for (const auto* src : {&file, &flags}) {
    for (const auto& [key, value] : *src) {
      if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
        throw Error(ErrorCode::UnknownKey, key);
      }
    }
  }

  std::string suite;
  if (auto it = flags.find("suite"); it != flags.end() && !it->second.empty()) {
    suite = it->second;
  } else if (auto jt = file.find("suite"); jt != file.end()) {
    suite = jt->second;
  }
  if (suite.empty()) throw Error(ErrorCode::MissingRequired, "suite");
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw Error(ErrorCode::OutOfRange, "suite=" + suite + " (unknown suite)");
  }

  std::map<std::string, std::string> merged = suite_defaults(suite);
  for (const auto& [k, v] : file) merged[k] = v;
  for (const auto& [k, v] : flags) merged[k] = v;
  merged["suite"] = suite;

  ExperimentConfig c;
  c.suite = suite;
  for (const auto& [key, value] : merged) {
    if (key == "suite") continue;
    if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "trials") c.trials = parse_number<std::size_t>(key, value);
    else if (key == "workers") c.workers = parse_number<std::size_t>(key, value);
    else if (key == "out") c.out = value;
    else if (key == "d") c.d = parse_number<std::size_t>(key, value);
    else if (key == "K") c.k = parse_number<std::size_t>(key, value);
    else if (key == "M") c.m = parse_number<std::size_t>(key, value);
    else if (key == "T") c.t = parse_number<std::size_t>(key, value);
    else if (key == "L") c.l = parse_number<std::size_t>(key, value);
    else if (key == "epsilon") c.epsilon = parse_number<double>(key, value);
    else if (key == "delta") c.delta = parse_number<double>(key, value);
    else if (key == "c0") c.c0 = parse_number<double>(key, value);
    else if (key == "c1") c.c1 = parse_number<double>(key, value);
    else if (key == "c2") c.c2 = parse_number<double>(key, value);
    else if (key == "eta") c.eta = value.empty() ? std::nullopt : std::optional(parse_number<double>(key, value));
    else if (key == "trigger") c.trigger = value;
    else if (key == "nb_log_m_squared") c.nb_log_m_squared = parse_bool(key, value);
    else if (key == "instance") c.instance = value;
    else if (key == "max_retries") c.max_retries = parse_number<std::size_t>(key, value);
    else if (key == "k_values") c.k_values = parse_list(key, value);
    else if (key == "decode_accuracy") c.decode_accuracy = parse_number<double>(key, value);
  }
  if (suite == "kscaling") c.trials = c.k_values.size();
  validate(c);
  return c;
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::string ks;
  for (std::size_t i = 0; i < k_values.size(); ++i) ks += (i ? "," : "") + std::to_string(k_values[i]);
  return {{"suite", suite},
          {"seed", std::to_string(seed)},
          {"trials", std::to_string(trials)},
          {"workers", std::to_string(workers)},
          {"out", out},
          {"d", std::to_string(d)},
          {"K", std::to_string(k)},
          {"M", std::to_string(m)},
          {"T", std::to_string(t)},
          {"L", std::to_string(l)},
          {"epsilon", format_double(epsilon)},
          {"delta", format_double(delta)},
          {"c0", format_double(c0)},
          {"c1", format_double(c1)},
          {"c2", format_double(c2)},
          {"eta", eta ? format_double(*eta) : ""},
          {"trigger", trigger},
          {"nb_log_m_squared", nb_log_m_squared ? "true" : "false"},
          {"instance", instance},
          {"max_retries", std::to_string(max_retries)},
          {"k_values", ks},
          {"decode_accuracy", format_double(decode_accuracy)}};
}

std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t index) {
  return derive_seed(config.seed, index, config.suite);
}

}  // namespace povmshadow::harness
