#include <cstdlib>
#include <string>

#include "specfun/parallel.hpp"

namespace specfun {

std::size_t suite_threads() {
  if (const char* env = std::getenv("SPECFUN_SP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace specfun
