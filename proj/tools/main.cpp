#include "h3flow/cli.hpp"

int main(int argc, char** argv) { return h3flow::run(argc, argv); }
