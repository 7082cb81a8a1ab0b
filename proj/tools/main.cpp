#include "commands.hpp"

int main(int argc, char** argv) { return mattekit::cli::run(argc, argv); }
