#include "interest/cli.hpp"

int main(int argc, char** argv) { return interest::cli::run(argc, argv); }
