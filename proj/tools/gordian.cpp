// Command-line entry point. Subcommand implementations live in the library
// (gordian/cli.hpp); this file is flag parsing only.

#include <cstdio>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::fprintf(stderr, "gordian: not yet implemented\n");
  return 2;
}
