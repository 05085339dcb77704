#include <iostream>

#include "qldp/cli.hpp"

int main(int argc, char** argv) { return qldp::cli::dispatch(argc, argv, std::cout, std::cerr); }
