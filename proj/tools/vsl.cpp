#include "vsl/cli.hpp"

int main(int argc, char** argv) { return vsl::cli_main(argc, argv); }
