#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace npdist::cli {

// Exit codes: 0 success, 1 usage error, 2 computation error (range/limit,
// I/O, checkpoint), 3 verification failure (a failing identity report or a
// violated bound).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace npdist::cli
