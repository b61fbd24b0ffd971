#pragma once

#include <stdexcept>
#include <string>

namespace sphereperc {

// Parameter outside its geometric or probabilistic domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Attempt to project the North Pole (no image on the plane).
class PoleProjectionError : public DomainError {
public:
    using DomainError::DomainError;
};

// A deterministic construction failed its own feasibility check.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sphereperc
