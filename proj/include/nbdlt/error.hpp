#ifndef NBDLT_ERROR_HPP
#define NBDLT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace nbdlt {

// Raised when a precondition or internal invariant is violated.  These always
// indicate a bug in the caller or the simulator itself, never bad user input.
struct InvariantError : std::logic_error {
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

// Raised for invalid user-supplied configuration.  Collects every violation
// found so the user can fix them all in one pass.
struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;

  explicit ConfigError(std::vector<std::string> v)
      : std::runtime_error(join(v)), violations(std::move(v)) {}

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvariantError(what);
}

}  // namespace nbdlt

#endif
