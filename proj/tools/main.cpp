#include "commands.hpp"

int main(int argc, char** argv) { return slm::cli::run(argc, argv); }
