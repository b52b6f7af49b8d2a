#include "seqspace/error.hpp"

namespace seqspace {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::index: return "index";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::singular: return "singular";
    case ErrorKind::truncation_unsound: return "truncation-unsound";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::domain: return "domain";
    case ErrorKind::internal: return "internal";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::sampling_exhausted: return "sampling-exhausted";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

}  // namespace seqspace
