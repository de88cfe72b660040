#pragma once

#include <stdexcept>

namespace hlsum {

// Thrown when a computation would exceed a desk-scale resource guard
// (dense tensor size, enumeration width). Kept distinct from domain errors
// so front-ends can map it to a dedicated exit code.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hlsum
