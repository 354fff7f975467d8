#include <iostream>

#include "gridrisk/cli/commands.hpp"

int main(int argc, char** argv) { return gridrisk::cli::run(argc, argv, std::cout, std::cerr); }
