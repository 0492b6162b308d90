#include "gaussbound/cli.hpp"

int main(int argc, char** argv) { return gaussbound::cli::run(argc, argv); }
