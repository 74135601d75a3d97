#ifndef TIWIFI_ERROR_HPP
#define TIWIFI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tiwifi {

// Configuration / input errors: recoverable, reported to the caller.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Violated model invariant: a programming error, aborts the run.
class SimError : public std::logic_error {
 public:
  explicit SimError(const std::string& what) : std::logic_error(what) {}
};

// Invariant check that stays on in release builds. The simulator relies on
// these as the runtime property suite, so they must never compile out.
#define TIWIFI_CHECK(cond, msg)                                      \
  do {                                                               \
    if (!(cond)) {                                                   \
      throw ::tiwifi::SimError(std::string("invariant violated: ") + \
                               (msg) + " [" #cond "]");              \
    }                                                                \
  } while (0)

}  // namespace tiwifi

#endif
