#pragma once

#include <stdexcept>
#include <string>

namespace tnet {

// Error taxonomy mirrored by the C ABI and the CLI exit codes:
// invalid -> bad inputs/config (exit 2), numeric -> solver/convergence
// trouble (exit 3), io -> unreadable/unwritable files (exit 2).
class Error : public std::runtime_error {
public:
  enum class Kind { invalid, numeric, io };

  Error(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) { throw Error(Error::Kind::invalid, msg); }
[[noreturn]] inline void fail_numeric(const std::string& msg) { throw Error(Error::Kind::numeric, msg); }
[[noreturn]] inline void fail_io(const std::string& msg) { throw Error(Error::Kind::io, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail_invalid(msg);
}

}  // namespace tnet
