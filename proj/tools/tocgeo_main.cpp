#include "tocgeo/experiments.hpp"

int main(int argc, char** argv) { return tocgeo::cli_main(argc, argv); }
