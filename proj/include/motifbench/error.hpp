#pragma once

#include <stdexcept>
#include <string>

namespace motifbench {

enum class ErrorKind { Param, Io, Runtime, NotFound, Counter };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ParamError : Error {
    explicit ParamError(const std::string& what) : Error(ErrorKind::Param, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

struct NotFoundError : Error {
    explicit NotFoundError(const std::string& what) : Error(ErrorKind::NotFound, what) {}
};

struct CounterError : Error {
    explicit CounterError(const std::string& what) : Error(ErrorKind::Counter, what) {}
};

}  // namespace motifbench
