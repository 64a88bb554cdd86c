#pragma once

#include <cmath>
#include <stdexcept>

#include "mugi/bf16.hpp"

namespace mugi {

enum class NonlinearKind { Exp, Silu, Gelu, GeluTanh, GeluFast };

inline const char* name_of(NonlinearKind k) {
  switch (k) {
    case NonlinearKind::Exp: return "exp";
    case NonlinearKind::Silu: return "silu";
    case NonlinearKind::Gelu: return "gelu";
    case NonlinearKind::GeluTanh: return "gelu_tanh";
    case NonlinearKind::GeluFast: return "gelu_fast";
  }
  return "?";
}

// Double-precision reference forms. These populate the LUT; the fitted
// tanh variants use the published constants verbatim.
inline double reference_eval(NonlinearKind k, double x) {
  switch (k) {
    case NonlinearKind::Exp:
      return std::exp(x);
    case NonlinearKind::Silu:
      return x / (1.0 + std::exp(-x));
    case NonlinearKind::Gelu:
      return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
    case NonlinearKind::GeluTanh:
      return 0.5 * x * (1.0 + std::tanh(std::sqrt(2.0 / M_PI) * (x + 0.044715 * x * x * x)));
    case NonlinearKind::GeluFast:
      return 0.5 * x * (1.0 + std::tanh(0.7978845608 * x * (1.0 + 0.004715 * x * x)));
  }
  throw std::invalid_argument("unknown nonlinear kind");
}

// Sign covered by a single-sign LUT. Exp is used on max-subtracted softmax
// inputs, so its one-sided domain is negative; the activation functions
// default to the positive side.
inline int single_sign_of(NonlinearKind k) { return k == NonlinearKind::Exp ? 1 : 0; }

// Resolved outputs for the special-value mux. Zero keeps the input sign
// (exp(+-0)=1, f(+-0)=+-0 for the activations); Inf propagates for the
// activations and follows exp's limits; NaN propagates the input pattern.
inline Bf16 special_result(NonlinearKind k, Special sp, Bf16 input) {
  switch (sp) {
    case Special::Zero:
      return k == NonlinearKind::Exp ? bf16_one() : bf16_zero(input.sign());
    case Special::Inf:
      if (k == NonlinearKind::Exp) return input.sign() ? bf16_zero(0) : bf16_inf(0);
      return bf16_inf(input.sign());
    case Special::NaN:
      return input;
    case Special::None:
      break;
  }
  throw std::invalid_argument("special_result on non-special input");
}

}  // namespace mugi
