#include <innerlab/cli.hpp>

int main(int argc, char** argv) { return innerlab::run_cli(argc, argv); }
