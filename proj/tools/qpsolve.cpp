// SPDX-License-Identifier: MIT
#include "qpspec/harness.hpp"

int main(int argc, char** argv) { return qpspec::cli_main(argc, argv); }
