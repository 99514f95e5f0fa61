#include "ribaucour/cli_io.hpp"

int main(int argc, char** argv) { return ribaucour::run_cli(argc, argv); }
