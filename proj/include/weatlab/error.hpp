#pragma once

#include <stdexcept>
#include <string>

namespace weatlab {

// All library failures are reported through this type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace weatlab
