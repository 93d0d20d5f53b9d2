#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgq {

using Real = double;
using Point = std::vector<Real>;

inline constexpr const char* kVersion = "0.1.0";

/// A model size (states x joint actions x states) exceeded a configured cap.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Quadrature produced something unusable (e.g. a transition row with almost no mass).
class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

/// Run-config file failed to parse or validate; carries a line anchor.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& file, int line, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace mgq
