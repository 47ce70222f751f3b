#include <csignal>
#include <exception>
#include <iostream>

#include "kif/cli.hpp"

namespace {

extern "C" void on_signal(int) { kif::cli::stop_serving(); }

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    try {
        return kif::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr, std::cin);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
