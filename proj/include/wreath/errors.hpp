#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wreath {

// Two elements from different groups met in one operation.
struct MismatchedGroups : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised by parsers: group descriptors, words, element JSON, configs.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The exact path solver refuses instances above its point cap.
struct TooLarge : std::runtime_error {
  TooLarge(int points_, int cap_)
      : std::runtime_error("path solver: " + std::to_string(points_) +
                           " points exceed cap " + std::to_string(cap_)),
        points(points_), cap(cap_) {}

  int points;
  int cap;
};

// A search ran out of its state budget before finishing.
struct ResourceLimit : std::runtime_error {
  ResourceLimit(const std::string &what_, std::size_t states_explored_)
      : std::runtime_error(what_ + " (explored " +
                           std::to_string(states_explored_) + " states)"),
        states_explored(states_explored_) {}

  std::size_t states_explored;
};

// An internal consistency check failed: bad action table, non-homomorphic
// embedding, inconsistent cached data.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two points that are supposed to share an orbit do not.
struct OrbitMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

} // namespace wreath
