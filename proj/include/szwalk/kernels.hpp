#pragma once

// Complex-double inner-loop kernels behind the matrix-free operator path.
// Two implementations exist: a scalar reference and an AVX2+FMA variant.
// The active table is picked once at startup from CPU features and can be
// overridden with the SZWALK_KERNELS environment variable ("scalar"/"avx2")
// or programmatically via set_backend (used by the equivalence tests).

#include <complex>
#include <cstddef>
#include <cstdint>

namespace szwalk::kernels {

using cxd = std::complex<double>;

struct KernelTable {
  // out[k] = in[perm[k]]
  void (*permute)(cxd* out, const cxd* in, const int32_t* perm, std::size_t n);
  // out[k] = c*in[k] + s*in[perm[k]]
  void (*permute_axpby)(cxd* out, const cxd* in, const int32_t* perm, cxd c,
                        cxd s, std::size_t n);
  // y[k] += a*x[k]
  void (*axpy)(cxd* y, cxd a, const cxd* x, std::size_t n);
  // sum_k conj(x[k])*y[k]
  cxd (*dotc)(const cxd* x, const cxd* y, std::size_t n);
  // sum_k |x[k]|^2
  double (*norm_sq)(const cxd* x, std::size_t n);
  // For each contiguous block [off[b], off[b+1]):
  //   out[k] = (2/len)*sum(in over block) - in[k]
  void (*grover_reflect)(cxd* out, const cxd* in, const int32_t* off,
                         std::size_t n_blocks);
  const char* name;
};

enum class Backend { scalar, avx2 };

namespace scalar {
extern const KernelTable table;
}
namespace avx2 {
extern const KernelTable table;  // defined only in x86-64 builds
}

bool avx2_supported();
const KernelTable& table(Backend b);  // throws if b is not compiled in
const KernelTable& active();
Backend active_backend();
// Returns false (and leaves the active table unchanged) when the requested
// backend is unavailable on this CPU/build.
bool set_backend(Backend b);

}  // namespace szwalk::kernels
