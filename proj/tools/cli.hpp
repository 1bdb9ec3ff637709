#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlb::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumerical = 3 };

// args excludes the program name.  Results go to out, the one-line error
// record (code=..., exit=..., msg="...") to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace nlb::cli
