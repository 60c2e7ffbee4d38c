#include "common.hpp"

int main(int argc, char** argv) { return brdim::cli::run_main(argc, argv); }
