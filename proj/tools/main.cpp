#include "opgraph/commands.hpp"

int main(int argc, char** argv) { return opgraph::cli::run_cli(argc, argv); }
