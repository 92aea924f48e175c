#pragma once

#include <stdexcept>
#include <string>

namespace ips {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// A local rate exceeded the model's declared c_max.
class RateBoundError : public Error {
public:
    explicit RateBoundError(const std::string &msg) : Error(msg) {}
};

/// A patch or halo was read outside the materialized region.
class RegionError : public Error {
public:
    explicit RegionError(const std::string &msg) : Error(msg) {}
};

/// Reverse reachability reached the boundary of the materialized region.
class ClusterEscapeError : public RegionError {
public:
    explicit ClusterEscapeError(const std::string &msg) : RegionError(msg) {}
};

/// A trajectory left the truncated state space used by the exact oracle.
class TruncationError : public Error {
public:
    explicit TruncationError(const std::string &msg) : Error(msg) {}
};

/// The enumerated state space exceeds the configured cap.
class StateSpaceError : public Error {
public:
    explicit StateSpaceError(const std::string &msg) : Error(msg) {}
};

/// Invalid model/plan/config parameters.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string &msg) : Error(msg) {}
};

}  // namespace ips
