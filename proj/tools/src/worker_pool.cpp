#include "irl_cli/worker_pool.hpp"

#include <cstdlib>
#include <string>

namespace irl::cli {

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("IRL_LAB_THREADS")) {
    try {
      const long long v = std::stoll(cap);
      if (v >= 1) n = std::min(n, static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      // unparsable values leave the default in place
    }
  }
  return n;
}

}  // namespace irl::cli
