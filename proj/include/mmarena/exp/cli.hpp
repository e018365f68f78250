#pragma once

namespace mmarena::exp {

// Entry point for the mm_arena tool: run | report | eval-checkpoints |
// importance | market-dump. Returns the process exit status.
int run_cli(int argc, char** argv);

}  // namespace mmarena::exp
