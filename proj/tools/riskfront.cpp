#include <iostream>

#include "riskfront/cli.hpp"

int main(int argc, char** argv) { return riskfront::run_cli(argc, argv, std::cout, std::cerr); }
