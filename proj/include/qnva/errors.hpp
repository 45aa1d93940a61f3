#pragma once

#include <stdexcept>
#include <string>

namespace qnva {

/// A proof sequence violated a structural requirement (e.g. a tuple that is
/// only partially cryptic).
class MalformedSequence : public std::runtime_error {
public:
    explicit MalformedSequence(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario or run parameters are inconsistent (bad degree, too few
/// aggregators, missing seed, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An adversary strategy cannot be executed on the given input (e.g. fewer
/// cryptic tuples than bits that must be placed). Callers report and skip.
class DegenerateInput : public std::runtime_error {
public:
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

/// The harness delivered events out of order or twice; indicates a driver
/// bug, never a protocol-level verdict.
class ProtocolError : public std::logic_error {
public:
    explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace qnva
