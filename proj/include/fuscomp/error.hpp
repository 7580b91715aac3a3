#pragma once

#include <stdexcept>
#include <string>

namespace fuscomp {

// Every failure carries the module that detected it.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
    const std::string& module() const { return module_; }

private:
    std::string module_;
};

[[noreturn]] inline void fail(const char* module, const std::string& what) {
    throw Error(module, what);
}

inline void require(bool cond, const char* module, const std::string& what) {
    if (!cond) fail(module, what);
}

}  // namespace fuscomp
