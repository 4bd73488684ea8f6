#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "berrylab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  berrylab::RunConfig cfg;
  try {
    cfg = berrylab::parse_args(args);
  } catch (const berrylab::HelpRequested& e) {
    std::cout << e.what();
    return 0;
  } catch (const berrylab::UsageError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    return berrylab::run(cfg);
  } catch (const berrylab::UsageError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
