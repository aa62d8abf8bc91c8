#include "solverkit/threads.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace solverkit {

namespace {

int env_thread_cap() {
    const char* s = std::getenv("SOLVER_KIT_THREADS");
    if (!s || !*s) return 0;
    int value = 0;
    auto [p, ec] = std::from_chars(s, s + std::strlen(s), value);
    if (ec != std::errc{} || *p != '\0' || value <= 0) return 0;
    return value;
}

} // namespace

int configure_threads(int requested) {
    int cap = requested > 0 ? requested : env_thread_cap();
#ifdef _OPENMP
    if (cap > 0) omp_set_num_threads(cap);
    return omp_get_max_threads();
#else
    (void)cap;
    return 1;
#endif
}

int configure_threads() { return configure_threads(0); }

} // namespace solverkit
