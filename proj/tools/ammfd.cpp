#include "ammfd/cli.hpp"

int main(int argc, char** argv) { return ammfd::cli::run(argc, argv); }
