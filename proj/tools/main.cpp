#include "commands.hpp"

int main(int argc, char** argv) { return mirror::cli::run({argv, argv + argc}); }
