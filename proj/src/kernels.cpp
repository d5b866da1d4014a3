#include "indra/kernels.hpp"

namespace indra::kernels {

// Four fixed lanes (index mod 4), combined (s0+s1)+(s2+s3). Not reassociated
// by the compiler without -ffast-math, so the bit pattern is stable.

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  if (i < n) s0 += a[i] * b[i];
  if (i + 1 < n) s1 += a[i + 1] * b[i + 1];
  if (i + 2 < n) s2 += a[i + 2] * b[i + 2];
  return (s0 + s1) + (s2 + s3);
}

double sumsq(const double* a, std::size_t n) { return dot(a, a, n); }

double sum(const double* a, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i];
    s1 += a[i + 1];
    s2 += a[i + 2];
    s3 += a[i + 3];
  }
  if (i < n) s0 += a[i];
  if (i + 1 < n) s1 += a[i + 1];
  if (i + 2 < n) s2 += a[i + 2];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace indra::kernels
