#pragma once

#include <stdexcept>
#include <string>

namespace ktr {

enum class ErrCode { invalid = 1, io = 2, numeric = 3 };

class Error : public std::runtime_error {
public:
  Error(ErrCode code, const std::string &msg) : std::runtime_error(msg), code_(code) {}
  ErrCode code() const { return code_; }

private:
  ErrCode code_;
};

[[noreturn]] inline void fail_invalid(const std::string &msg) { throw Error(ErrCode::invalid, msg); }
[[noreturn]] inline void fail_io(const std::string &msg) { throw Error(ErrCode::io, msg); }
[[noreturn]] inline void fail_numeric(const std::string &msg) { throw Error(ErrCode::numeric, msg); }

} // namespace ktr
