#ifndef GFADAPT_ERROR_H_
#define GFADAPT_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gfadapt {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or violated precondition (dimension mismatch, bad config).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated input. `offset` is the byte position in the
// stream where parsing stopped, or -1 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int64_t offset)
      : Error(offset >= 0 ? what + " (at byte " + std::to_string(offset) + ")"
                          : what),
        offset_(offset) {}

  int64_t offset() const { return offset_; }

 private:
  int64_t offset_;
};

// Failure reading or writing an external stream/file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gfadapt

#endif  // GFADAPT_ERROR_H_
