#pragma once

namespace tidyplan {

// Parses argv and dispatches to the subcommands. Returns the process exit
// code; all failures are reported on stderr as "error[<code>]: <message>".
int run_cli(int argc, const char* const* argv);

}  // namespace tidyplan
