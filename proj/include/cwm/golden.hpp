#pragma once

#include <functional>

namespace cwm {

struct ScalarMax {
  double x;
  double value;
};

// Golden-section search for the maximum of a unimodal function on [lo, hi].
// Stops once the bracket is narrower than abs_tol. The endpoints are evaluated
// too, so a function that is monotone on the interval returns the endpoint.
ScalarMax golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                  double abs_tol = 1e-8, int max_iter = 500);

// Same search driven by diff(a, b) = f(a) - f(b). Useful when f can be
// differenced without the cancellation of subtracting two large values, which
// otherwise limits the location of a flat maximum to about sqrt(eps) * |x|.
double golden_section_argmax_by_difference(const std::function<double(double, double)>& diff,
                                           double lo, double hi, double abs_tol = 1e-8,
                                           int max_iter = 500);

}  // namespace cwm
