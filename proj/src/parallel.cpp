#include "ltlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ltlab::parallel {

std::size_t worker_count() {
    if (const char* env = std::getenv("LTLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace ltlab::parallel
