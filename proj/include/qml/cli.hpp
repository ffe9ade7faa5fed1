#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qml {

// Runs one command given argv[1:]; all output goes to the two streams.
// Exit codes: 0 affirmative/ok, 1 negative/refuted/unknown, 2 bad usage
// or malformed input.
int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qml
