#include "gradar/cli.hpp"

int main(int argc, char** argv) { return gradar::cli_main(argc, argv); }
