#include <iostream>

#include "ernn/cli.hpp"

int main(int argc, char** argv) {
  const auto r = ernn::cli::run(std::vector<std::string>(argv, argv + argc));
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
