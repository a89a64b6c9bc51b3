#include "cwm/cli.hpp"

int main(int argc, char** argv) { return cwm::cli::run(argc, argv); }
