#include "commands.hpp"

int main(int argc, char** argv) { return ffmop::cli::run(argc, argv); }
