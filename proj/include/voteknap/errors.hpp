#pragma once

#include <stdexcept>
#include <string>

namespace voteknap {

// An argument violates an operation's preconditions.
class invalid_input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request would exceed a hard size limit (guards against exponential blowup).
class size_limit_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Moment fitting: the sample variance is incompatible with any Beta distribution.
class infeasible_moments_error : public invalid_input_error {
 public:
  using invalid_input_error::invalid_input_error;
};

// Moment fitting: all samples identical, variance zero.
class degenerate_sample_error : public invalid_input_error {
 public:
  using invalid_input_error::invalid_input_error;
};

// A structured input document could not be parsed.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A destination could not be opened or written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace voteknap
