#pragma once

namespace hlsum {

// Caps the OpenMP worker count for all kernels in this library. Every kernel
// decomposes its work into fixed blocks that do not depend on the worker
// count, so results are byte-identical for any setting. 0 restores the
// hardware default. No-op in builds without OpenMP.
void set_max_threads(int count);
int max_threads();

}  // namespace hlsum
