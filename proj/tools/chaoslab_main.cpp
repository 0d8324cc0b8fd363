#include "chaoslab/sweep.hpp"

int main(int argc, char** argv) { return chaoslab::cli_main(argc, argv); }
