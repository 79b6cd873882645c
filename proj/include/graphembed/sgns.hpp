#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace graphembed {

// Skip-gram negative-sampling kernel shared by LINE and node2vec.
//
// One training example pairs an input vector h with `outputs.size()` output vectors:
// outputs[0] is the positive target, the rest are noise samples. The loss is
//
//   loss = -log sigma(h . c_0) - sum_{k>=1} log sigma(-h . c_k)
//
// and an update is one step of gradient descent on it with every output vector's
// gradient taken at the old h.

template <typename T>
inline T sigmoid(T x) {
  return x >= 0 ? T(1) / (T(1) + std::exp(-x)) : std::exp(x) / (T(1) + std::exp(x));
}

template <typename T>
inline T log_sigmoid(T x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Eight partial sums combined in a fixed order: vectorizable and reproducible.
template <typename T>
inline T dot(const T* a, const T* b, std::size_t dim) {
  T s[8] = {};
  const std::size_t blocked = dim - dim % 8;
  for (std::size_t i = 0; i < blocked; i += 8)
    for (std::size_t j = 0; j < 8; ++j) s[j] += a[i + j] * b[i + j];
  T total = ((s[0] + s[4]) + (s[1] + s[5])) + ((s[2] + s[6]) + (s[3] + s[7]));
  for (std::size_t i = blocked; i < dim; ++i) total += a[i] * b[i];
  return total;
}

template <typename T>
T sgns_loss(const T* input, std::span<const T* const> outputs, std::size_t dim) {
  T loss = 0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const T x = dot(input, outputs[k], dim);
    loss -= k == 0 ? log_sigmoid(x) : log_sigmoid(-x);
  }
  return loss;
}

/// grad_input has `dim` entries; grad_outputs holds outputs.size() rows of `dim`.
template <typename T>
void sgns_gradient(const T* input, std::span<const T* const> outputs, std::size_t dim,
                   T* grad_input, T* grad_outputs) {
  for (std::size_t i = 0; i < dim; ++i) grad_input[i] = 0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const T label = k == 0 ? T(1) : T(0);
    const T coeff = -(label - sigmoid(dot(input, outputs[k], dim)));
    for (std::size_t i = 0; i < dim; ++i) {
      grad_input[i] += coeff * outputs[k][i];
      grad_outputs[k * dim + i] = coeff * input[i];
    }
  }
}

/// In-place SGD step with learning rate `rate`. `scratch` needs `dim` entries.
template <typename T>
void sgns_apply(T* input, std::span<T* const> outputs, std::size_t dim, T rate, T* scratch) {
  for (std::size_t i = 0; i < dim; ++i) scratch[i] = 0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    T* out = outputs[k];
    const T g = ((k == 0 ? T(1) : T(0)) - sigmoid(dot(input, out, dim))) * rate;
    for (std::size_t i = 0; i < dim; ++i) scratch[i] += g * out[i];
    for (std::size_t i = 0; i < dim; ++i) out[i] += g * input[i];
  }
  for (std::size_t i = 0; i < dim; ++i) input[i] += scratch[i];
}

/// sgns_apply that also returns the loss evaluated before the update.
template <typename T>
T sgns_update(T* input, std::span<T* const> outputs, std::size_t dim, T rate, T* scratch) {
  const T loss = sgns_loss(input, std::span<const T* const>(outputs.data(), outputs.size()), dim);
  sgns_apply(input, outputs, dim, rate, scratch);
  return loss;
}

} // namespace graphembed
