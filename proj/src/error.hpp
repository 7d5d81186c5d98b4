#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lucid {

// Error categories. They surface through the C API as status codes and
// through the CLI as exit codes, so additions belong at the end.
enum class errc {
  parse = 1,
  unknown_name = 2,
  singular = 3,
  invalid = 4,
  unsupported = 5,
  internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace lucid
