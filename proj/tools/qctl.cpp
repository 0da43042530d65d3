#include "cli.hpp"

int main(int argc, char** argv) { return qctl::cli::main_entry(argc, argv); }
