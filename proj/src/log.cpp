#include "alphastable/log.hpp"

#include <iostream>
#include <mutex>

namespace alphastable::log {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

Sink& current_sink() {
  static Sink sink = [](std::string_view msg) { std::clog << "warning: " << msg << '\n'; };
  return sink;
}

}  // namespace

void set_warning_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  current_sink() = std::move(sink);
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (current_sink()) current_sink()(message);
}

}  // namespace alphastable::log
