#pragma once

#include <stdexcept>
#include <string>

namespace tidyplan {

// Error taxonomy shared by the library and the CLI. The CLI prints
// "error[<name>]: <message>" on stderr so callers can match on the name.
enum class ErrorCode {
  parse,             // malformed input document
  io,                // file could not be read or written
  reference,         // id not present in the referenced scene
  coverage,          // prior/affinity/commonsense table missing an entry
  validation,        // scene or arrangement violates a structural invariant
  precondition,      // operation called on inputs it cannot accept
  comparison,        // operands refer to different scenes
  degenerate_usage,  // all usage frequencies are zero
  capacity,          // instance too large for exhaustive search
  oracle_parse,      // model reply not parsable after retries
  transport,         // network failure talking to the oracle endpoint
  completeness,      // arrangement does not place every object
  config,            // bad configuration value
  usage,             // command line misuse
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tidyplan
