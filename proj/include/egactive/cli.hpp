#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace egactive {

/// Subcommands run, compare, synth and selftest. Returns 0 on success,
/// 2 on usage errors and 1 on any other failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace egactive
