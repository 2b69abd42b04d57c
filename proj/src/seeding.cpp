#include "lagbo/seeding.hpp"

#include "lagbo/error.hpp"

namespace lagbo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::LagTooLarge: return "LagTooLarge";
    case ErrorCode::SingularRegression: return "SingularRegression";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CholeskyFailure: return "CholeskyFailure";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::HistoryTooShort: return "HistoryTooShort";
    case ErrorCode::PipelineFailed: return "PipelineFailed";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::GapError: return "GapError";
    case ErrorCode::NonMonotoneError: return "NonMonotoneError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

}  // namespace lagbo
