// riskwave_main.cpp -- command-line entry point
#include <string>
#include <vector>

#include "riskwave/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return riskwave::app::run(args);
}
