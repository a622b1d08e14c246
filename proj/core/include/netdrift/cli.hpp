#pragma once

namespace netdrift {

// Command-line entry point (subcommands: generate, simulate, communities,
// test, fig1, ci-contrast). Returns the process exit status: 0 on success,
// 1 on usage errors, 2 on runtime errors.
int cli_main(int argc, const char* const* argv);

}  // namespace netdrift
