#include "cwm/golden.hpp"

#include <cmath>

#include "cwm/errors.hpp"

namespace cwm {

ScalarMax golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                  double abs_tol, int max_iter) {
  if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "golden section: lo > hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > abs_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }

  ScalarMax best = fc >= fd ? ScalarMax{c, fc} : ScalarMax{d, fd};
  const double mid = 0.5 * (a + b);
  const double fmid = f(mid);
  if (fmid > best.value) best = {mid, fmid};
  const double flo = f(lo);
  if (flo > best.value) best = {lo, flo};
  const double fhi = f(hi);
  if (fhi > best.value) best = {hi, fhi};
  return best;
}

double golden_section_argmax_by_difference(const std::function<double(double, double)>& diff,
                                           double lo, double hi, double abs_tol, int max_iter) {
  if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "golden section: lo > hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  for (int it = 0; it < max_iter && (b - a) > abs_tol; ++it) {
    if (diff(c, d) >= 0.0) {
      b = d;
      d = c;
      c = b - inv_phi * (b - a);
    } else {
      a = c;
      c = d;
      d = a + inv_phi * (b - a);
    }
  }

  double best = diff(c, d) >= 0.0 ? c : d;
  for (double x : {0.5 * (a + b), lo, hi}) {
    if (diff(x, best) > 0.0) best = x;
  }
  return best;
}

}  // namespace cwm
