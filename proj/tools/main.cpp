#include "cli.hpp"

int main(int argc, char** argv) { return ealab::cli::dispatch(argc, argv); }
