#include "nonrecip/cli.hpp"

int main(int argc, char** argv) { return nonrecip::run_cli(argc, argv); }
