#include "seedbank/cli.hpp"

int main(int argc, char** argv) { return seedbank::cli::run(argc, argv); }
