#pragma once

#include "nlslab/common.hpp"

namespace nlslab::fft {

// Unnormalized forward transform: out_m = sum_j in_j e^{-2 pi i jm/n}.
void forward(const cplx* in, cplx* out, int n);
// Unnormalized inverse transform: out_j = sum_m in_m e^{+2 pi i jm/n}.
void inverse(const cplx* in, cplx* out, int n);

inline CVec forward(const CVec& in) {
  CVec out(in.size());
  forward(in.data(), out.data(), static_cast<int>(in.size()));
  return out;
}
inline CVec inverse(const CVec& in) {
  CVec out(in.size());
  inverse(in.data(), out.data(), static_cast<int>(in.size()));
  return out;
}

inline bool is_pow2(long n) { return n > 0 && (n & (n - 1)) == 0; }
inline int next_pow2(long n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace nlslab::fft
