#include "storeim/cli.hpp"

int main(int argc, char** argv) { return storeim::cli::run(argc, argv); }
