#include "relfix/parallel.hpp"

#include <cstdlib>
#include <string>

namespace relfix {

std::size_t worker_count() {
  if (char const* env = std::getenv("RELFIX_THREADS")) {
    try {
      long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace relfix
