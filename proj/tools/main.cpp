#include "npdist/cli.hpp"

int main(int argc, char** argv) { return npdist::cli::run(argc, argv); }
