#include "ratchet/cli.hpp"

int main(int argc, char** argv) { return ratchet::run_command(argc, argv); }
