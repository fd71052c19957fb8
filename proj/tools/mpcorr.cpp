#include <iostream>

#include "mpcorr/cli.hpp"

int main(int argc, char** argv) { return mpcorr::cli::run(argc, argv, std::cout, std::cerr); }
