#include "nlscat/io.hpp"

int main(int argc, char** argv) { return nlscat::run_cli(argc, argv); }
