#include "grsp/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grsp/errors.hpp"

namespace grsp {

namespace {

double clamped_acos_ratio(double num, double den) {
  double ratio = num / den;
  ratio = std::clamp(ratio, 0.0, 1.0); // absorb floating-point drift
  return 2.0 * std::acos(ratio);
}

std::string format_amplitude(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

} // namespace

SparseState normalize_and_validate(int n, const std::vector<std::pair<basis_t, double>>& raw) {
  if (n < 1 || n > 63)
    fail(ErrorCategory::invalid_argument, "qubit count must be in [1, 63], got " + std::to_string(n));
  const basis_t limit = basis_count(n);
  std::map<basis_t, double> entries;
  double norm_sq = 0.0;
  for (const auto& [index, amplitude] : raw) {
    if (index >= limit)
      fail(ErrorCategory::index_out_of_range,
           "index " + std::to_string(index) + " out of range for n=" + std::to_string(n));
    if (amplitude < 0.0 || !std::isfinite(amplitude))
      fail(ErrorCategory::negative_amplitude,
           "amplitude for index " + std::to_string(index) + " must be finite and >= 0");
    if (!entries.emplace(index, amplitude).second)
      fail(ErrorCategory::duplicate_index, "duplicate index " + std::to_string(index));
    norm_sq += amplitude * amplitude;
  }
  std::erase_if(entries, [](const auto& kv) { return kv.second == 0.0; });
  if (entries.empty())
    fail(ErrorCategory::empty_support, "state has no nonzero amplitude");
  const double norm = std::sqrt(norm_sq);
  SparseState state;
  state.n = n;
  for (auto& [index, amplitude] : entries) state.entries.emplace(index, amplitude / norm);
  return state;
}

PreparationTree build_preparation_tree(const SparseState& state) {
  PreparationTree tree;
  tree.n = state.n;
  tree.levels.assign(static_cast<std::size_t>(state.n) + 1, {});
  auto& leaves = tree.levels[static_cast<std::size_t>(state.n)];
  for (const auto& [index, amplitude] : state.entries) leaves.emplace(index, amplitude);
  for (int k = state.n - 1; k >= 0; --k) {
    auto& level = tree.levels[static_cast<std::size_t>(k)];
    for (const auto& [child, amplitude] : tree.levels[static_cast<std::size_t>(k) + 1])
      level[child >> 1] += amplitude * amplitude;
    for (auto& [prefix, value] : level) value = std::sqrt(value);
  }
  return tree;
}

BaselineCircuit compute_baseline_angles(const PreparationTree& tree) {
  BaselineCircuit baseline;
  baseline.n = tree.n;
  baseline.layers.assign(static_cast<std::size_t>(tree.n), {});
  for (int k = 0; k < tree.n; ++k) {
    auto& layer = baseline.layers[static_cast<std::size_t>(k)];
    const auto& children = tree.level(k + 1);
    for (const auto& [prefix, amplitude] : tree.level(k)) {
      auto child0 = children.find(prefix << 1);
      const double zero_branch = child0 == children.end() ? 0.0 : child0->second;
      layer.emplace(prefix, clamped_acos_ratio(zero_branch, amplitude));
    }
  }
  return baseline;
}

double prefix_probability(const PreparationTree& tree, const ControlPattern& pattern) {
  const int k = pattern.length();
  if (k > tree.n)
    fail(ErrorCategory::length_mismatch,
         "pattern length " + std::to_string(k) + " exceeds qubit count " + std::to_string(tree.n));
  double prob = 0.0;
  for (const auto& [prefix, amplitude] : tree.level(k))
    if (pattern.matches(prefix)) prob += amplitude * amplitude;
  return prob;
}

// --- text / JSON -------------------------------------------------------------

namespace {

SparseState parse_state_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1;
  std::vector<std::pair<basis_t, double>> raw;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    std::string trimmed = line.substr(begin, end - begin + 1);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (n < 0) {
      if (trimmed.rfind("n=", 0) != 0)
        fail(ErrorCategory::parse_error, "state file must start with an n=<int> header");
      try {
        n = std::stoi(trimmed.substr(2));
      } catch (const std::exception&) {
        fail(ErrorCategory::parse_error, "invalid qubit count in header: " + trimmed);
      }
      continue;
    }
    std::istringstream fields(trimmed);
    std::string bits;
    double amplitude = 0.0;
    std::string extra;
    if (!(fields >> bits >> amplitude) || (fields >> extra))
      fail(ErrorCategory::parse_error, "malformed state entry: " + trimmed);
    if (static_cast<int>(bits.size()) != n)
      fail(ErrorCategory::parse_error,
           "entry bit string \"" + bits + "\" does not have length n=" + std::to_string(n));
    raw.emplace_back(parse_bit_string(bits), amplitude);
  }
  if (n < 0) fail(ErrorCategory::parse_error, "empty state file");
  return normalize_and_validate(n, raw);
}

SparseState parse_state_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCategory::parse_error, std::string("invalid state JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries"))
    fail(ErrorCategory::parse_error, "state JSON must contain \"n\" and \"entries\"");
  std::vector<std::pair<basis_t, double>> raw;
  for (const auto& entry : doc.at("entries")) {
    if (!entry.is_array() || entry.size() != 2)
      fail(ErrorCategory::parse_error, "state entries must be [index, amplitude] pairs");
    raw.emplace_back(entry.at(0).get<basis_t>(), entry.at(1).get<double>());
  }
  return normalize_and_validate(doc.at("n").get<int>(), raw);
}

} // namespace

SparseState parse_state(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_state_json(text);
  return parse_state_text(text);
}

std::string to_text(const SparseState& state) {
  std::string out = "n=" + std::to_string(state.n) + "\n";
  for (const auto& [index, amplitude] : state.entries)
    out += to_bit_string(index, state.n) + " " + format_amplitude(amplitude) + "\n";
  return out;
}

std::string to_json_text(const SparseState& state) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [index, amplitude] : state.entries)
    entries.push_back(nlohmann::json::array({index, amplitude}));
  return nlohmann::json{{"n", state.n}, {"entries", entries}}.dump(2) + "\n";
}

SparseState read_state_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io_error, "cannot open state file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_state(buffer.str());
}

void write_state_file(const SparseState& state, const std::string& path, bool json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io_error, "cannot write state file: " + path);
  out << (json ? to_json_text(state) : to_text(state));
}

} // namespace grsp
