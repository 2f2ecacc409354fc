#include <iostream>

#include "lg/cli.hpp"

int main(int argc, char** argv) { return lg::cli::run(argc, argv, std::cout); }
