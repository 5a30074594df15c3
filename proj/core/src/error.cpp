#include "gadforge/error.hpp"

namespace gadforge {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Saturation: return "saturation";
    case ErrorKind::Split: return "split";
    case ErrorKind::Injection: return "injection";
    case ErrorKind::Metric: return "metric";
    case ErrorKind::Numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace gadforge
