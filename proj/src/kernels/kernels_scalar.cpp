#include "szwalk/kernels.hpp"

// Reference implementations. These define the semantics; the SIMD variants
// are equivalence-tested against them.

namespace szwalk::kernels::scalar {

namespace {

void permute(cxd* out, const cxd* in, const int32_t* perm, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = in[perm[k]];
}

void permute_axpby(cxd* out, const cxd* in, const int32_t* perm, cxd c, cxd s,
                   std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = c * in[k] + s * in[perm[k]];
}

void axpy(cxd* y, cxd a, const cxd* x, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

cxd dotc(const cxd* x, const cxd* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    re += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    im += x[k].real() * y[k].imag() - x[k].imag() * y[k].real();
  }
  return {re, im};
}

double norm_sq(const cxd* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    acc += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  return acc;
}

void grover_reflect(cxd* out, const cxd* in, const int32_t* off,
                    std::size_t n_blocks) {
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const int32_t lo = off[b], hi = off[b + 1];
    cxd sum = 0.0;
    for (int32_t k = lo; k < hi; ++k) sum += in[k];
    const cxd g = (2.0 / static_cast<double>(hi - lo)) * sum;
    for (int32_t k = lo; k < hi; ++k) out[k] = g - in[k];
  }
}

}  // namespace

const KernelTable table = {permute, permute_axpby, axpy,
                           dotc,    norm_sq,       grover_reflect,
                           "scalar"};

}  // namespace szwalk::kernels::scalar
