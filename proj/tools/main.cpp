#include "confalg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return confalg::cli::runCommand(args, std::cout, std::cerr);
}
