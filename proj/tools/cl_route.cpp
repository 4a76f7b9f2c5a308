#include "clroute/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return clroute::cli::run(argc, argv, std::cout, std::cerr);
}
