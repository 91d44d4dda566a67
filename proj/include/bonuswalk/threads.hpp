#pragma once

// Thread-count resolution for the OpenMP kernels. The BONUSWALK_THREADS
// environment variable caps parallelism; a positive `requested` argument
// overrides it (used by tests to pin a level).

namespace bonuswalk {

// requested > 0: use that many threads.
// requested == 0: BONUSWALK_THREADS if set and positive, else the OpenMP
// default (1 when built without OpenMP).
int resolve_threads(int requested = 0);

} // namespace bonuswalk
