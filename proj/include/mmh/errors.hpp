#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mmh {

// Map/corpus document violations (malformed structure, bad field values).
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structurally valid document whose content breaks a domain invariant.
struct ValidationError : std::runtime_error {
    ValidationError(std::string element, const std::string& message)
        : std::runtime_error(element + ": " + message), element_id(std::move(element)) {}
    std::string element_id;
};

struct UnknownCorridor : std::runtime_error {
    explicit UnknownCorridor(const std::string& id)
        : std::runtime_error("unknown corridor: " + id) {}
};

struct InvalidOrigin : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateMap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// LLM wire client failures.
struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AuthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Minimal result type for operations whose failure is a value, not an exception.
template <typename T, typename E>
class Expected {
public:
    Expected(T value) : ok_(true), value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
    Expected(E error) : ok_(false), error_(std::move(error)) {}  // NOLINT(google-explicit-constructor)

    bool has_value() const { return ok_; }
    explicit operator bool() const { return ok_; }

    T& value() { return value_; }
    const T& value() const { return value_; }
    E& error() { return error_; }
    const E& error() const { return error_; }

    T& operator*() { return value_; }
    const T& operator*() const { return value_; }
    T* operator->() { return &value_; }
    const T* operator->() const { return &value_; }

private:
    bool ok_;
    T value_{};
    E error_{};
};

}  // namespace mmh
