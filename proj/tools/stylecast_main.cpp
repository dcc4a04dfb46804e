#include "stylecast/cli.hpp"

int main(int argc, char** argv) { return stylecast::run_cli(argc, argv); }
