#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  return pedcrop::cli::run_command_line({argv + 1, argv + argc}, std::cout, std::cerr);
}
