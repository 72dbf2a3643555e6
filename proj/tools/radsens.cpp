#include "radsens/cli.hpp"

int main(int argc, char** argv) { return radsens::cli::run(argc, argv); }
