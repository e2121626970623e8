#pragma once

namespace tandem {

/// Selects the OpenMP kernel or its serial reference. Both paths write into
/// index-ordered buffers, so results are identical either way.
enum class Exec { Serial, Parallel };

/// Number of OpenMP threads the parallel kernels will use.
int worker_count();

}  // namespace tandem
