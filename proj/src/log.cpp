#include "hbtdit/log.hpp"

#include <iostream>
#include <mutex>
#include <string>

namespace hbtdit {
namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return h;
}

}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (auto& h = handler_slot()) h(message);
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  auto previous = std::move(handler_slot());
  handler_slot() = std::move(handler);
  return previous;
}

}  // namespace hbtdit
