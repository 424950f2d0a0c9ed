#include "ricci/cli.hpp"

int main(int argc, char** argv) { return ricci::cli_main(argc, argv); }
