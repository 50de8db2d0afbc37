#include "mdicke/cli/config.hpp"
#include "mdicke/cli/run.hpp"

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
  try {
    const auto cfg = mdicke::cli::parse_args(argc, argv);
    if (!cfg) return 0;
    return mdicke::cli::run_command(*cfg, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "mdicke: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mdicke: " << e.what() << '\n';
    return 1;
  }
}
