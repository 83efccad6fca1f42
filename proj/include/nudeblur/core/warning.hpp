#pragma once

#include <functional>
#include <string>

namespace nudeblur {

/// Non-fatal diagnostics (CG stopping early, pruned mixture components).
/// The default handler writes "warning: <message>" to stderr.
using WarningHandler = std::function<void(const std::string&)>;

void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace nudeblur
