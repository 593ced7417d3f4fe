#include "commands.hpp"

int main(int argc, char** argv) { return delamseg::cli::run(argc, argv); }
