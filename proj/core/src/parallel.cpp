#include "holodet/parallel.hpp"

#include <cstdlib>

namespace holodet {

int workers_from_env(int fallback) {
  const char* env = std::getenv("HOLODET_WORKERS");
  if (env == nullptr) return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 1024) return fallback;
  return static_cast<int>(v);
}

}  // namespace holodet
