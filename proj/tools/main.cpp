#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
    return hazard_bayes::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
