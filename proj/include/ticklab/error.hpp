#pragma once

#include <stdexcept>
#include <string>

namespace ticklab {

/// Every precondition failure in the library is reported with this type.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    invalid_argument,
    insufficient_data,
    degenerate,
    parse,
    io,
    numeric,
  };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

[[noreturn]] inline void fail(Error::Kind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, Error::Kind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace ticklab
