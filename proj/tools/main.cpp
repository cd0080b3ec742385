#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "bomdiff_viewer_bundle.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return bomdiff::cli::run(args, std::cout, std::cerr, bomdiff::kViewerBundle);
}
