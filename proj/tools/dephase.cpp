#include "commands.hpp"

int main(int argc, char** argv) { return dephase::run(argc, argv); }
