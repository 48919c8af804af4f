#pragma once

#include "isac/types.hpp"

namespace isac::detail {

/// Unnormalized strided DFT over one axis, repeated over two outer loops.
/// sign = -1 computes Σ x e^{-j2πkn/N}; sign = +1 the conjugate kernel.
/// in and out must not alias.
struct DftShape {
  int n;
  int stride;
  int count0;
  int dist0;
  int count1;
  int dist1;
};

void dft(const cd* in, cd* out, const DftShape& shape, int sign);

}  // namespace isac::detail
