#include "k3fg/cli.hpp"

int main(int argc, char** argv) { return k3fg::cli::dispatch(argc, argv); }
