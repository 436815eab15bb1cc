#include <iostream>

#include "panelprobit/cli.hpp"

int main(int argc, char** argv) { return panelprobit::run_cli(argc, argv, std::cout, std::cerr); }
