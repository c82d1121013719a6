#include <exception>
#include <iostream>

#include "riswt/cli_io.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << riswt::usage_text();
    return 2;
  }
  riswt::RunConfig cfg;
  try {
    cfg = riswt::parse_config(argc, argv);
  } catch (const riswt::usage_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  try {
    return riswt::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
