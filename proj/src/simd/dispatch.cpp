#include <cstdlib>
#include <string_view>

#include "nudeblur/simd/kernels.hpp"

namespace nudeblur::simd {

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("NUDEBLUR_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace nudeblur::simd
