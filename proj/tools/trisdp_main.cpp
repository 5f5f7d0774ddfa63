#include <iostream>

#include "trisdp/io/commands.hpp"

int main(int argc, char** argv) { return trisdp::io::run_cli(argc, argv, std::cout, std::cerr); }
