#pragma once

#include <stdexcept>
#include <string>

namespace zonenav {

/// Malformed input file (JSON syntax, wrong field types). Message carries
/// the file name and line when known.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input parsed but violates a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scene generator request that cannot be laid out on the grid.
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingEmbedding : public std::runtime_error {
 public:
  explicit MissingEmbedding(const std::string& label)
      : std::runtime_error("missing embedding for label '" + label + "'"), label_(label) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class UnknownLabel : public std::runtime_error {
 public:
  explicit UnknownLabel(const std::string& label)
      : std::runtime_error("label '" + label + "' is not in the priors vocabulary"), label_(label) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

}  // namespace zonenav
