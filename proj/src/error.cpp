#include "logpart/error.hpp"

namespace logpart {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_input: return "MalformedInput";
    case Errc::negative_weight: return "NegativeWeight";
    case Errc::duplicate_edge: return "DuplicateEdge";
    case Errc::self_loop: return "SelfLoop";
    case Errc::invalid_alphabet: return "InvalidAlphabet";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::disconnected_graph: return "DisconnectedGraph";
    case Errc::cycle_in_support: return "CycleInSupport";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::edge_uncovered: return "EdgeUncovered";
    case Errc::solver_failure: return "SolverFailure";
    case Errc::invariant_violation: return "InvariantViolation";
  }
  return "Unknown";
}

ErrorClass classify(Errc code) noexcept {
  switch (code) {
    case Errc::cap_exceeded:
    case Errc::edge_uncovered:
      return ErrorClass::capability;
    case Errc::solver_failure:
    case Errc::invariant_violation:
      return ErrorClass::internal;
    default:
      return ErrorClass::validation;
  }
}

namespace {

std::string decorate(Errc code, const std::string& what, std::optional<int> line) {
  std::string out = to_string(code);
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += what;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& what, std::optional<int> line)
    : std::runtime_error(decorate(code, what, line)), code_(code), line_(line) {}

}  // namespace logpart
