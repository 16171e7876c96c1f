#include "tidyplan/commands.hpp"

int main(int argc, char** argv) { return tidyplan::run_cli(argc, argv); }
