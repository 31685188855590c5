#include "commands.hpp"

int main(int argc, char** argv) {
  return fclab::cli::run_command({argv + 1, argv + argc});
}
