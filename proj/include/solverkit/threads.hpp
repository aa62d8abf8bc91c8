#pragma once

namespace solverkit {

// Applies the SOLVER_KIT_THREADS environment cap (a positive integer) to the
// OpenMP runtime and returns the thread count now in effect. Unset, empty or
// unparsable values leave the runtime default alone. Builds without OpenMP
// always report 1.
int configure_threads();

// Same, but an explicit request wins over the environment. 0 means "ask the
// environment".
int configure_threads(int requested);

} // namespace solverkit
