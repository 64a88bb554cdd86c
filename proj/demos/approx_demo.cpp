// Walks a few BF16 values through the value-centric approximation path and
// prints what the array would produce, then runs a small softmax.

#include <cmath>
#include <cstdio>
#include <vector>

#include "mugi/approx.hpp"
#include "mugi/softmax.hpp"

using namespace mugi;

int main() {
  const Lut lut = build_lut(NonlinearKind::Exp, {-6, 5, true});
  const SlidingWindow sw = select_window(lut, {-6, 4}, WindowPolicy::AlignMax);
  std::printf("exp approximation, sliding window base 2^%d\n", sw.base_exp);
  std::printf("%12s %12s %12s %8s %6s\n", "x", "approx", "exact", "relerr", "cycle");
  for (const float x : {-0.04f, -0.375f, -1.5f, -2.7f, -6.0f, -13.0f, -40.0f, 0.0f}) {
    const ApproxResult r = approximate_one(bf16_from_float(x), sw, NonlinearKind::Exp);
    const double exact = std::exp(static_cast<double>(x));
    const double approx = to_float(r.value);
    std::printf("%12g %12g %12g %7.2f%% %6d\n", x, approx, exact,
                100.0 * std::fabs(approx - exact) / exact, r.subscription_cycle);
  }

  const std::vector<Bf16> scores = {bf16_from_float(2.5f), bf16_from_float(1.0f),
                                    bf16_from_float(0.25f), bf16_from_float(-3.0f)};
  const Lut sm_lut = build_lut(NonlinearKind::Exp, {-6, 5, false});
  const auto probs = softmax(scores, sm_lut);
  std::printf("\nsoftmax([2.5, 1, 0.25, -3]) = [");
  float sum = 0.0f;
  for (size_t i = 0; i < probs.size(); ++i) {
    std::printf("%s%g", i ? ", " : "", to_float(probs[i]));
    sum += to_float(probs[i]);
  }
  std::printf("], sum %g\n", sum);
  return 0;
}
