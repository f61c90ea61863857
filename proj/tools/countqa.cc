#include <iostream>

#include "countqa/cli.h"

int main(int argc, char **argv) { return countqa::RunCli(argc, argv, std::cout, std::cerr); }
