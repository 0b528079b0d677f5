#pragma once

#include <stdexcept>
#include <string>

namespace treeshape {

// A size argument exceeded a configured resource cap.
class cap_exceeded : public std::length_error {
 public:
  cap_exceeded(const std::string& what, std::size_t cap)
      : std::length_error(what + " exceeds cap " + std::to_string(cap)), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

}  // namespace treeshape
