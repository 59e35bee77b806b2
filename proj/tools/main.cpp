#include "faststream/cli.hpp"

int main(int argc, char** argv) { return faststream::cli::run(argc, argv); }
