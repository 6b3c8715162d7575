#include "cli.hpp"

int main(int argc, char** argv) { return hullscope::cli::run(argc, argv); }
