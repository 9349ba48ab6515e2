#pragma once

#include <stdexcept>
#include <string>

namespace crossflow {

// Input failed domain validation. `field` is a machine-readable path such as
// "params.special_needs_fraction" or "grid[2]".
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A pipeline state or intermediate value stopped being finite.
class StateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing resource (file, trained model, ingested panel).
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace crossflow
