#pragma once

#include <stdexcept>
#include <string>

namespace matrange {

enum class ErrorKind {
  dimension,     // shapes or tuple sizes disagree
  precondition,  // input outside the documented domain
  numerical,     // solver or iteration failure
  io,            // parsing / file errors
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, ErrorKind kind, const char* what) {
  if (!ok) fail(kind, what);
}

}  // namespace matrange
