#include "mfirl/harness/cli.hpp"

int main(int argc, char** argv) { return mfirl::run_cli(argc, argv); }
