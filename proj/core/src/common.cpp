#include <cmath>
#include <numeric>

#include "ideageo/error.hpp"
#include "ideageo/matrix.hpp"

namespace ideageo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid parameter";
    case ErrorCode::empty_vocabulary: return "empty vocabulary";
    case ErrorCode::all_unknown_tokens: return "all tokens unknown";
    case ErrorCode::unknown_document: return "unknown document";
    case ErrorCode::zero_vector: return "zero vector";
    case ErrorCode::size_mismatch: return "size mismatch";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::insufficient_data: return "insufficient data";
    case ErrorCode::degenerate_input: return "degenerate input";
    case ErrorCode::empty_designs: return "empty designs";
    case ErrorCode::all_masked: return "all cells masked";
    case ErrorCode::io: return "i/o error";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::validation: return "validation error";
    case ErrorCode::bad_magic: return "bad magic";
    case ErrorCode::version_mismatch: return "version mismatch";
    case ErrorCode::truncated: return "truncated";
  }
  return "unknown error";
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::dimension_mismatch, "dot: vectors of length " +
                                                   std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()));
  }
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::zero_vector, "cosine: zero-norm vector");
  }
  return dot(a, b) / (na * nb);
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::dimension_mismatch, "euclidean: vectors of length " +
                                                   std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace ideageo
