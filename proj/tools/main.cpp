#include "commands.hpp"

int main(int argc, char** argv) { return fsvar::cli::run(argc, argv); }
