#include "netrate_cli.hpp"

int main(int argc, char** argv) { return netrate::cli::run(argc, argv); }
