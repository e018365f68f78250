#include "mmarena/exp/cli.hpp"

int main(int argc, char** argv) { return mmarena::exp::run_cli(argc, argv); }
