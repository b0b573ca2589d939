#include "grsp/simulator.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "grsp/errors.hpp"

namespace grsp {

namespace {

constexpr double kAmplitudeDrop = 1e-15;

// Per-layer gate index: concrete gates by hash, wildcard gates by scan.
struct LayerIndex {
  std::unordered_map<basis_t, double> concrete;
  std::vector<std::pair<ControlPattern, double>> wild;

  explicit LayerIndex(const GateLayer& layer) {
    for (const auto& [pattern, theta] : layer.gates()) {
      if (pattern.is_concrete())
        concrete.emplace(pattern.value(), theta);
      else
        wild.emplace_back(pattern, theta);
    }
  }

  double angle_for(basis_t prefix, int depth) const {
    int covers = 0;
    double theta = 0.0;
    if (auto it = concrete.find(prefix); it != concrete.end()) {
      ++covers;
      theta = it->second;
    }
    for (const auto& [pattern, angle] : wild)
      if (pattern.matches(prefix)) {
        ++covers;
        theta = angle;
      }
    if (covers > 1)
      fail(ErrorCategory::region_overlap,
           "two gates cover prefix " + to_bit_string(prefix, depth));
    return theta;
  }
};

// Running prefix amplitudes; flips to a dense array once the sparse map
// exceeds a quarter of the full level (and the level fits in memory).
class Wavefront {
public:
  void start() {
    sparse_.clear();
    sparse_.emplace(0, 1.0);
    dense_mode_ = false;
    depth_ = 0;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    if (dense_mode_) {
      for (basis_t b = 0; b < dense_.size(); ++b)
        if (dense_[b] != 0.0) fn(b, dense_[b]);
    } else {
      for (const auto& [b, a] : sparse_) fn(b, a);
    }
  }

  std::size_t size() const {
    if (dense_mode_) {
      std::size_t count = 0;
      for (double a : dense_)
        if (a != 0.0) ++count;
      return count;
    }
    return sparse_.size();
  }

  void advance(const LayerIndex& index, int depth) {
    const int next_depth = depth + 1;
    const bool go_dense =
        next_depth <= 26 && (dense_mode_ || size() * 2 > (basis_t{1} << next_depth) / 4);
    if (go_dense) {
      std::vector<double> next(basis_t{1} << next_depth, 0.0);
      for_each([&](basis_t b, double a) {
        const double theta = index.angle_for(b, depth);
        const double c = a * std::cos(theta / 2.0);
        const double s = a * std::sin(theta / 2.0);
        if (std::abs(c) > kAmplitudeDrop) next[(b << 1)] = c;
        if (std::abs(s) > kAmplitudeDrop) next[(b << 1) | 1] = s;
      });
      dense_ = std::move(next);
      dense_mode_ = true;
      sparse_.clear();
    } else {
      std::unordered_map<basis_t, double> next;
      next.reserve(sparse_.size() * 2);
      for (const auto& [b, a] : sparse_) {
        const double theta = index.angle_for(b, depth);
        const double c = a * std::cos(theta / 2.0);
        const double s = a * std::sin(theta / 2.0);
        if (std::abs(c) > kAmplitudeDrop) next.emplace((b << 1), c);
        if (std::abs(s) > kAmplitudeDrop) next.emplace((b << 1) | 1, s);
      }
      sparse_ = std::move(next);
    }
    depth_ = next_depth;
  }

  std::map<basis_t, double> to_map() const {
    std::map<basis_t, double> out;
    for_each([&](basis_t b, double a) { out.emplace(b, a); });
    return out;
  }

private:
  std::unordered_map<basis_t, double> sparse_;
  std::vector<double> dense_;
  bool dense_mode_ = false;
  int depth_ = 0;
};

} // namespace

double covering_angle(const GateLayer& layer, basis_t prefix) {
  int covers = 0;
  double theta = 0.0;
  for (const auto& [pattern, angle] : layer.gates())
    if (pattern.matches(prefix)) {
      ++covers;
      theta = angle;
    }
  if (covers > 1)
    fail(ErrorCategory::region_overlap,
         "two gates cover prefix " + to_bit_string(prefix, layer.depth()));
  return theta;
}

PrefixState simulate_prefixes(const Circuit& circuit, int depth) {
  if (depth < 0 || depth > circuit.n)
    fail(ErrorCategory::invalid_argument, "simulation depth out of range");
  Wavefront front;
  front.start();
  for (int k = 0; k < depth; ++k) {
    LayerIndex index(circuit.layers[static_cast<std::size_t>(k)]);
    front.advance(index, k);
  }
  PrefixState state;
  state.depth = depth;
  state.amplitudes = front.to_map();
  return state;
}

SparseState simulate(const Circuit& circuit) {
  PrefixState final_state = simulate_prefixes(circuit, circuit.n);
  SparseState state;
  state.n = circuit.n;
  state.entries = std::move(final_state.amplitudes);
  return state;
}

double overlap(const SparseState& a, const SparseState& b) {
  if (a.n != b.n)
    fail(ErrorCategory::dimension_mismatch,
         "states have different qubit counts: " + std::to_string(a.n) + " vs " + std::to_string(b.n));
  const SparseState& small = a.entries.size() <= b.entries.size() ? a : b;
  const SparseState& large = a.entries.size() <= b.entries.size() ? b : a;
  double sum = 0.0;
  for (const auto& [index, amplitude] : small.entries) {
    auto it = large.entries.find(index);
    if (it != large.entries.end()) sum += amplitude * it->second;
  }
  return sum;
}

} // namespace grsp
