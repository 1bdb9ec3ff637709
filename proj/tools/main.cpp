#include "cli.hpp"

int main(int argc, char** argv) { return nlb::cli::dispatch(argc, argv); }
