#include <iostream>

#include "padehankel/cli.hpp"

int main(int argc, char** argv) {
  auto r = padehankel::cli::run(argc, argv);
  std::cout << r.output;
  std::cerr << r.error;
  if (!r.error.empty() && r.error.back() != '\n') std::cerr << '\n';
  return r.exit_code;
}
