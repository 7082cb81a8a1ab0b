#pragma once

#include <functional>
#include <string_view>

namespace mattekit {

using WarningHandler = std::function<void(std::string_view)>;

/// Routes library warnings (renormalized PTM planes, degenerate metric
/// inputs). The default handler writes to stderr.
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace mattekit
