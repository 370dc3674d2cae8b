#pragma once

// Reference computations for tests. Deliberately written without the library's
// types or helpers: plain nested vectors, long double, textbook logistic.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tinynose/net.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<long double>>;
using Vector = std::vector<long double>;

struct DenseNet {
  Matrix w1;  // 5 x 5
  Vector b1;  // 5
  Matrix w2;  // 3 x 5
  Vector b2;  // 3
};

inline DenseNet from_params(const tinynose::NetworkParams& p) {
  DenseNet n;
  for (const auto& row : p.hidden_weights) n.w1.emplace_back(row.begin(), row.end());
  n.b1.assign(p.hidden_bias.begin(), p.hidden_bias.end());
  for (const auto& row : p.output_weights) n.w2.emplace_back(row.begin(), row.end());
  n.b2.assign(p.output_bias.begin(), p.output_bias.end());
  return n;
}

inline Vector mat_vec(const Matrix& m, const Vector& v) {
  Vector out(m.size(), 0.0L);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
  return out;
}

inline long double sigmoid(long double n) { return 1.0L / (1.0L + std::exp(-n)); }

inline Vector forward(const DenseNet& net, const Vector& input) {
  Vector h = mat_vec(net.w1, input);
  for (std::size_t j = 0; j < h.size(); ++j) h[j] = sigmoid(h[j] + net.b1[j]);
  Vector o = mat_vec(net.w2, h);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = sigmoid(o[i] + net.b2[i]);
  return o;
}

inline double relative_error(double got, long double want) {
  const long double diff = std::fabs(static_cast<long double>(got) - want);
  const long double scale = std::fabs(want);
  return static_cast<double>(scale > 0 ? diff / scale : diff);
}

/// Published trained parameters, transcribed as the printed decimal tokens.
inline const std::vector<std::vector<std::string>>& published_hlw() {
  static const std::vector<std::vector<std::string>> v = {
      {"0.96053576", "-0.49067116", "-2.25964108", "2.50108093", "0.19458625"},
      {"0.46907827", "5.48986523", "-4.78114212", "-4.99721858", "2.80680594"},
      {"-1.57636870", "-0.58488740", "2.68218068", "-1.25514649", "4.43993330"},
      {"-0.57512130", "2.82730697", "1.04113772", "5.14422524", "-1.64028299"},
      {"2.63760244", "2.83163383", "2.89952632", "-0.36016259", "-2.66582192"}};
  return v;
}
inline const std::vector<std::string>& published_hlb() {
  static const std::vector<std::string> v = {"-1.02772180", "-1.77963962", "2.64182372",
                                             "-0.97785230", "1.63223721"};
  return v;
}
inline const std::vector<std::vector<std::string>>& published_olw() {
  static const std::vector<std::vector<std::string>> v = {
      {"2.24302499", "-3.92702259", "-2.17715966", "2.91615488", "-3.41820192"},
      {"-2.09640007", "7.71309853", "-4.06959432", "0.4036855", "2.39010108"},
      {"1.86633665", "-4.39788864", "6.46096038", "-3.02420647", "-1.04196844"}};
  return v;
}
inline const std::vector<std::string>& published_olb() {
  static const std::vector<std::string> v = {"-2.90288788", "-1.10540564", "0.49794008"};
  return v;
}

/// All published tokens in file order: HLW rows, HLB, OLW rows, OLB.
inline std::vector<std::string> published_tokens() {
  std::vector<std::string> out;
  for (const auto& r : published_hlw()) out.insert(out.end(), r.begin(), r.end());
  out.insert(out.end(), published_hlb().begin(), published_hlb().end());
  for (const auto& r : published_olw()) out.insert(out.end(), r.begin(), r.end());
  out.insert(out.end(), published_olb().begin(), published_olb().end());
  return out;
}

inline DenseNet published_dense() {
  DenseNet n;
  for (const auto& r : published_hlw()) {
    Vector row;
    for (const auto& t : r) row.push_back(std::stold(t));
    n.w1.push_back(row);
  }
  for (const auto& t : published_hlb()) n.b1.push_back(std::stold(t));
  for (const auto& r : published_olw()) {
    Vector row;
    for (const auto& t : r) row.push_back(std::stold(t));
    n.w2.push_back(row);
  }
  for (const auto& t : published_olb()) n.b2.push_back(std::stold(t));
  return n;
}

/// The published parameters as doubles (std::stod of each printed token).
inline tinynose::NetworkParams published_params() {
  tinynose::NetworkParams p;
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t k = 0; k < 5; ++k) p.hidden_weights[j][k] = std::stod(published_hlw()[j][k]);
  for (std::size_t j = 0; j < 5; ++j) p.hidden_bias[j] = std::stod(published_hlb()[j]);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 5; ++j) p.output_weights[i][j] = std::stod(published_olw()[i][j]);
  for (std::size_t i = 0; i < 3; ++i) p.output_bias[i] = std::stod(published_olb()[i]);
  return p;
}

/// Seeded random parameters and inputs for property runs.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  tinynose::NetworkParams params(double range) {
    tinynose::NetworkParams p;
    p.for_each_scalar([&](double& v) { v = uniform(-range, range); });
    return p;
  }
  tinynose::InputVector input() {
    tinynose::InputVector in;
    for (double& v : in.values) v = uniform(0.0, 1.0);
    return in;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
