#pragma once

#include <functional>
#include <string_view>

namespace hbtdit {

using WarningHandler = std::function<void(std::string_view)>;

/// Non-fatal diagnostics (rounding, far-field guard, truncation) go through
/// here. The default handler prints to stderr.
void warn(std::string_view message);

/// Installs a new handler and returns the previous one. Passing an empty
/// function silences warnings.
WarningHandler set_warning_handler(WarningHandler handler);

/// RAII capture of warnings, mostly for tests.
class ScopedWarningCapture {
public:
  explicit ScopedWarningCapture(WarningHandler handler)
      : previous_(set_warning_handler(std::move(handler))) {}
  ~ScopedWarningCapture() { set_warning_handler(std::move(previous_)); }
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

private:
  WarningHandler previous_;
};

}  // namespace hbtdit
