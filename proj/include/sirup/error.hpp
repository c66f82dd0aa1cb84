#pragma once

#include <stdexcept>
#include <string>

namespace sirup {

enum class ErrorKind {
    syntax,
    arity,
    not_ditree,
    not_1cq,
    precondition,
    cap_exceeded,
    name_clash,
    io,
    internal,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace sirup
