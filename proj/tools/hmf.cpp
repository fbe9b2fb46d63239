#include "hmf/cli.hpp"

int main(int argc, char** argv) { return hmf::cli::run(argc, argv); }
