#pragma once

#include <stdexcept>
#include <string>

namespace ncr {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto process exit classes: usage errors exit 1, data/format errors
// exit 2, numeric failures exit 3.
enum class ErrCode {
  // data / format
  ZeroVector,
  DimensionMismatch,
  BadMagic,
  SizeMismatch,
  IdCountMismatch,
  DuplicateId,
  IoFailure,
  ParseError,
  OverlapError,
  SelfLoop,
  TooFewSamples,
  EmptyPairs,
  UnresolvableId,
  InsufficientDiversity,
  NoPositives,
  MissingGt,
  SingletonGroup,
  ValidationError,
  // numeric
  RankDeficient,
  DivergedLoss,
  // usage
  UsageError,
};

inline const char* to_string(ErrCode c) {
  switch (c) {
    case ErrCode::ZeroVector: return "ZeroVector";
    case ErrCode::DimensionMismatch: return "DimensionMismatch";
    case ErrCode::BadMagic: return "BadMagic";
    case ErrCode::SizeMismatch: return "SizeMismatch";
    case ErrCode::IdCountMismatch: return "IdCountMismatch";
    case ErrCode::DuplicateId: return "DuplicateId";
    case ErrCode::IoFailure: return "IoFailure";
    case ErrCode::ParseError: return "ParseError";
    case ErrCode::OverlapError: return "OverlapError";
    case ErrCode::SelfLoop: return "SelfLoop";
    case ErrCode::TooFewSamples: return "TooFewSamples";
    case ErrCode::EmptyPairs: return "EmptyPairs";
    case ErrCode::UnresolvableId: return "UnresolvableId";
    case ErrCode::InsufficientDiversity: return "InsufficientDiversity";
    case ErrCode::NoPositives: return "NoPositives";
    case ErrCode::MissingGt: return "MissingGt";
    case ErrCode::SingletonGroup: return "SingletonGroup";
    case ErrCode::ValidationError: return "ValidationError";
    case ErrCode::RankDeficient: return "RankDeficient";
    case ErrCode::DivergedLoss: return "DivergedLoss";
    case ErrCode::UsageError: return "UsageError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg),
        code_(code) {}

  ErrCode code() const noexcept { return code_; }

  // Process exit class used by the CLI. 1 = usage, 2 = data/format,
  // 3 = numeric failure.
  int exit_class() const noexcept {
    switch (code_) {
      case ErrCode::UsageError:
        return 1;
      case ErrCode::RankDeficient:
      case ErrCode::DivergedLoss:
        return 3;
      default:
        return 2;
    }
  }

 private:
  ErrCode code_;
};

[[noreturn]] inline void fail(ErrCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace ncr
