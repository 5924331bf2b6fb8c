#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace molpipe::cli {

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIo = 3,
  kConfig = 4,
  kData = 5,
};

// args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace molpipe::cli
