#include "szwalk/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace szwalk::kernels {

bool avx2_supported() {
#ifdef SZWALK_WITH_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table(Backend b) {
  switch (b) {
    case Backend::scalar:
      return scalar::table;
    case Backend::avx2:
#ifdef SZWALK_WITH_AVX2
      return avx2::table;
#else
      break;
#endif
  }
  throw std::runtime_error("kernel backend not compiled in");
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("SZWALK_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && avx2_supported()) return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend& backend_ref() {
  static Backend b = initial_backend();
  return b;
}

}  // namespace

const KernelTable& active() { return table(backend_ref()); }

Backend active_backend() { return backend_ref(); }

bool set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported()) return false;
  backend_ref() = b;
  return true;
}

}  // namespace szwalk::kernels
