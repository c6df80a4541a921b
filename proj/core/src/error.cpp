#include "fraudkit/error.hpp"

namespace fraudkit {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::LabelDomain: return "label-domain error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::ShapeMismatch: return "shape mismatch";
    case ErrorKind::Numerical: return "numerical error";
    case ErrorKind::UnsupportedVersion: return "unsupported version";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

}  // namespace fraudkit
