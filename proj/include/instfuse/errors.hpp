#pragma once

#include <stdexcept>
#include <string>

namespace instfuse {

// Decode/parse failures for the binary formats (messages, weight files).
enum class CodecErrorKind { MalformedHeader, LengthMismatch, VersionUnsupported };

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrorKind kind, const std::string& detail)
      : std::runtime_error(name(kind) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  CodecErrorKind kind() const { return kind_; }

  static std::string name(CodecErrorKind kind) {
    switch (kind) {
      case CodecErrorKind::MalformedHeader: return "malformed-header";
      case CodecErrorKind::LengthMismatch: return "length-mismatch";
      case CodecErrorKind::VersionUnsupported: return "version-unsupported";
    }
    return "unknown";
  }

 private:
  CodecErrorKind kind_;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Scene/sample placement could not satisfy the non-overlap constraint
// within the attempt budget.
class PlacementError : public std::runtime_error {
 public:
  explicit PlacementError(const std::string& msg)
      : std::runtime_error("placement-exhausted: " + msg) {}
};

}  // namespace instfuse
