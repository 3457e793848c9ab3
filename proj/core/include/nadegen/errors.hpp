#pragma once

#include <stdexcept>
#include <string>

namespace nadegen {

/// Malformed or incomplete input: bad config, unparsable rational, ids that
/// do not resolve. The CLI maps it to exit status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a mathematical invariant (face closure,
/// degree consistency, negative mass, ...). The CLI maps it to exit status 3.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nadegen
