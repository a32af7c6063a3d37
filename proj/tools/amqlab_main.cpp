#include <iostream>

#include "amqlab/cli.hpp"

int main(int argc, char** argv) { return amqlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
