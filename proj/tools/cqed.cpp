#include "cli/commands.hpp"

int main(int argc, char** argv) { return cqed::cli::run(argc, argv); }
