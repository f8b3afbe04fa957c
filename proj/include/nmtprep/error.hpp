#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nmtprep {

/// Bad user input: malformed files, violated preconditions, bad flags.
/// The command line tool maps this to exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid UTF-8. `offset` is the byte offset of the offending sequence
/// within the stream being decoded.
class DecodeError : public InputError {
 public:
  DecodeError(std::size_t offset, const std::string& what)
      : InputError("invalid UTF-8 at byte offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace nmtprep
