#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end. Subcommands: dicho, dichoi, dichogen, regdicho,
// simulate. Exit codes: 0 success, 1 computation error, 2 usage error.

namespace distdicho::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_main(int argc, char** argv);

} // namespace distdicho::cli
