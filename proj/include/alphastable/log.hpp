#pragma once

#include <functional>
#include <string_view>

namespace alphastable::log {

using Sink = std::function<void(std::string_view)>;

/// Routes warnings (clamped table lookups, floored scales, ...). The default
/// sink writes to std::clog; pass an empty function to silence.
void set_warning_sink(Sink sink);

void warn(std::string_view message);

}  // namespace alphastable::log
