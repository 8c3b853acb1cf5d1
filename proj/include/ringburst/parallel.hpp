#pragma once

namespace ringburst {

// Applies the RINGBURST_THREADS environment variable (if set) to OpenMP once
// per process and returns the active thread count.
int configure_threads();

}  // namespace ringburst
