#pragma once

#include <string>
#include <vector>

namespace ernn::cli {

// Exit codes: 0 success or accept, 1 reject or not found, 2 usage, parse or
// validation error.
struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// args[0] is the program name.
[[nodiscard]] CommandResult run(const std::vector<std::string>& args);

}  // namespace ernn::cli
