#include "qchaos/cli.hpp"
#include "qchaos/eigensolver.hpp"

#include <iostream>

int main(int argc, char** argv) {
    qchaos::ensure_blas_backend(argv);
    return qchaos::run_command(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
