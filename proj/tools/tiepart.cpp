#include "tiepart/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return tiepart::cli::run(argc, argv, std::cout, std::cerr);
}
