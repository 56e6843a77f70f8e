#include "aluthge/cli.hpp"

int main(int argc, char** argv) { return aluthge::cli::main(argc, argv); }
