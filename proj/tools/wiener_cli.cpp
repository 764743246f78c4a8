#include "wiener_cli.hpp"

int main(int argc, char** argv) { return wiener::cli::run(argc, argv); }
