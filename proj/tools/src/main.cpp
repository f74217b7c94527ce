#include "maxlln_cli/run.hpp"

int main(int argc, char** argv) { return maxlln::cli::main_entry(argc, argv); }
