#pragma once

#include <functional>
#include <string>
#include <vector>

namespace catlgt {

// Warning channel for soft failures (cutoff insufficiency, degenerate limits,
// strong-mixing advisories). The default sink writes to stderr.
using WarningSink = std::function<void(const std::string&)>;

void warn(const std::string& message);

/// Installs a new sink and returns the previous one. Thread-safe.
WarningSink set_warning_sink(WarningSink sink);

/// RAII capture of warnings, mostly for tests.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(const std::string& fragment) const;

 private:
  std::vector<std::string> messages_;
  WarningSink previous_;
};

}  // namespace catlgt
