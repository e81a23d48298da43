#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perdura {

// Stable machine-readable error codes. The CLI prints them as
// `error[CODE]: message` and maps them onto process exit codes.
enum class Errc {
  dangling_ref,
  invariant_violation,
  duplicate_id,
  unknown_class,
  unknown_individual,
  unknown_element,
  name_collision,
  instant_mismatch,
  kind_mismatch,
  insufficient_answers,
  session_complete,
  syntax_error,
  undeclared_entity,
  duplicate_entity,
  cyclic_subtype,
  not_functional,
  malformed_cq,
  dangling_mapping,
  schema_mismatch,
  usage,
  io,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }
  std::string_view code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace perdura
