#pragma once

#include <cstddef>

namespace indra::kernels {

// Canonical reductions. All order-sensitive sums in the library go through
// these: a fixed four-lane split (index mod 4) combined as (s0+s1)+(s2+s3).
// The order depends only on the element count, never on threading or call
// site, so repeated runs and full-vs-anchored builds agree bit-for-bit.

double dot(const double* a, const double* b, std::size_t n);
double sumsq(const double* a, std::size_t n);
double sum(const double* a, std::size_t n);

}  // namespace indra::kernels
