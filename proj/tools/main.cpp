#include "cli.hpp"

int main(int argc, char** argv) { return agentbom::cli::run(argc, argv); }
