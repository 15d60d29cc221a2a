#pragma once

#include <stdexcept>
#include <string>

namespace polarsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Unreadable or malformed external input (initial-condition tables).
class InputError : public Error {
public:
    using Error::Error;
};

class NumericOverflow : public Error {
public:
    using Error::Error;
};

/// Reference profile vanishes where the density does not.
class SupportMismatch : public Error {
public:
    using Error::Error;
};

/// Requested a polarised equilibrium in a regime where none exists.
class NoEquilibrium : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error("config error [" + key + "]: " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class BracketError : public Error {
public:
    BracketError(bool lo_blows_up, bool hi_blows_up, const std::string& what)
        : Error(what), lo_blows_up_(lo_blows_up), hi_blows_up_(hi_blows_up) {}

    bool lo_blows_up() const noexcept { return lo_blows_up_; }
    bool hi_blows_up() const noexcept { return hi_blows_up_; }

private:
    bool lo_blows_up_;
    bool hi_blows_up_;
};

} // namespace polarsim
