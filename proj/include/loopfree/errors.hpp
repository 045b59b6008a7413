#pragma once

#include <stdexcept>
#include <string>

namespace loopfree {

// A property the algorithms guarantee did not hold; always a bug.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad scenario or parameter input. `field` names the offending entry.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace loopfree
