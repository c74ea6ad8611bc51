// qfractal: chaos-game renderer for Möbius-boost iterated function systems
// on S², plus self-checks and alpha sweeps.

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv)
{
    return qfractal::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
