#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bomdiff::cli {

enum ExitCode : int {
    kIdentical = 0,
    kDifferent = 1,
    kFailure = 2,
};

/// Runs the full ingest -> map -> merge -> export pipeline. `args` excludes
/// the program name. Returns 0 when both inputs matched completely, 1 when
/// the merged graph has ONLY_A/ONLY_B nodes, 2 on any usage or stage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::string_view viewer_bundle);

} // namespace bomdiff::cli
