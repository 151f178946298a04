#include <iostream>

#include "run.hpp"

int main(int argc, char** argv) {
    return leocrlb::app::run_cli(argc, argv, std::cout, std::cerr);
}
