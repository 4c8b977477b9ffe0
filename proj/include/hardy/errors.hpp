#pragma once

#include <stdexcept>

namespace hardy {

// Enumeration would exceed the configured point budget.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sum or product hit a non-finite intermediate value.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters, including regime-rule violations.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hardy
