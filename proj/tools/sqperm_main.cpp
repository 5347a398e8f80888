#include "sqperm/cli.hpp"

int main(int argc, char** argv) { return sqperm::cli::run(argc, argv); }
