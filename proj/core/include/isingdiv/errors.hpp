#pragma once

#include <stdexcept>
#include <string>

namespace isingdiv {

/// Malformed or out-of-contract caller input (bad graph, bad JSON, bad parameter).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Request exceeds a hard resource limit (enumeration size, sample budget).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A runtime consistency check caught an oracle that broke its advertised contract.
class OracleFailure : public std::runtime_error {
 public:
  explicit OracleFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace isingdiv
