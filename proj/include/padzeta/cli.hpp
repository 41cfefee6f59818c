#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace padzeta::cli {

// Runs one CLI invocation. args excludes the program name. Reentrant, so
// tests can drive it directly; the binary's main is a thin wrapper.
//
// Exit codes: 0 success, 1 usage error, 2 mathematical failure
// (pole, precision exhausted, budget, domain), 3 a verification that ran
// to completion and found a counterexample.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padzeta::cli
