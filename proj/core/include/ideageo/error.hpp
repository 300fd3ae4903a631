#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ideageo {

enum class ErrorCode {
  invalid_parameter,
  empty_vocabulary,
  all_unknown_tokens,
  unknown_document,
  zero_vector,
  size_mismatch,
  dimension_mismatch,
  insufficient_data,
  degenerate_input,
  empty_designs,
  all_masked,
  io,
  parse,
  validation,
  bad_magic,
  version_mismatch,
  truncated,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for errors caused by caller-supplied parameters rather than data.
  bool is_usage_error() const noexcept {
    return code_ == ErrorCode::invalid_parameter;
  }

 private:
  ErrorCode code_;
};

}  // namespace ideageo
