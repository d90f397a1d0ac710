#pragma once

namespace rmf {

// Exit codes: 0 pass, 1 property violation, 2 invalid input or guard
// exceeded, 3 inconclusive comparison.
int cli_main(int argc, char** argv);

}  // namespace rmf
