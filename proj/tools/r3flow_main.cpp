#include <iostream>

#include "r3flow/cli.hpp"

int main(int argc, char** argv)
{
    return r3flow::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
