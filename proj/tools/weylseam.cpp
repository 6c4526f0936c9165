#include <iostream>

#include <weylseam/experiments.hpp>

int main(int argc, char** argv) {
    return weylseam::cli_main(argc, argv, std::cout, std::cerr);
}
