#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace logpart {

enum class Errc {
  malformed_input,
  negative_weight,
  duplicate_edge,
  self_loop,
  invalid_alphabet,
  invalid_argument,
  disconnected_graph,
  cycle_in_support,
  cap_exceeded,
  edge_uncovered,
  solver_failure,
  invariant_violation,
};

// Coarse grouping used for process exit codes.
enum class ErrorClass { validation, capability, internal };

const char* to_string(Errc code) noexcept;
ErrorClass classify(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<int> line = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<int> line() const noexcept { return line_; }

 private:
  Errc code_;
  std::optional<int> line_;
};

}  // namespace logpart
