#pragma once

#include <stdexcept>
#include <string>

namespace nsrag {

enum class ErrorKind {
  StorageUnavailable,
  SchemaMismatch,
  UnknownTable,
  UnknownColumn,
  TypeMismatch,
  DuplicatePrimaryKey,
  DanglingForeignKey,
  SqlSyntax,
  MutationRejected,
  SqlTimeout,
  NotFound,
  ParseError,
  InvariantViolation,
  DuplicatePaper,
  UnknownCollection,
  DuplicateEntry,
  DanglingProvenance,
  NotEncodablePair,
  FilterSyntax,
  UnknownField,
  FilterType,
  NotSupported,
  MalformedAction,
  UnknownActionType,
  MissingRequiredParameter,
  InvalidLimit,
  ExpressionSyntax,
  DivisionByZero,
  DisallowedConstruct,
  ExpressionOverflow,
  UnknownPaper,
  PageOutOfRange,
  DegenerateBox,
  VisionNotSupported,
  AuthError,
  RateLimited,
  NetworkError,
  ContextOverflow,
  ScriptedMismatch,
  GatewayError,
  UnknownEvalFunc,
  BadTag,
  JudgeUnavailable,
  KwargsMismatch,
  UsageError,
  ConfigError,
};

/// Kebab-case name of the kind, e.g. "duplicate-primary-key".
inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::StorageUnavailable: return "storage-unavailable";
    case ErrorKind::SchemaMismatch: return "schema-already-exists-with-different-shape";
    case ErrorKind::UnknownTable: return "unknown-table";
    case ErrorKind::UnknownColumn: return "unknown-column";
    case ErrorKind::TypeMismatch: return "type-mismatch";
    case ErrorKind::DuplicatePrimaryKey: return "duplicate-primary-key";
    case ErrorKind::DanglingForeignKey: return "dangling-foreign-key";
    case ErrorKind::SqlSyntax: return "sql-syntax-error";
    case ErrorKind::MutationRejected: return "mutation-rejected";
    case ErrorKind::SqlTimeout: return "timeout";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::InvariantViolation: return "invariant-violation";
    case ErrorKind::DuplicatePaper: return "duplicate-paper";
    case ErrorKind::UnknownCollection: return "unknown-collection";
    case ErrorKind::DuplicateEntry: return "duplicate-entry";
    case ErrorKind::DanglingProvenance: return "dangling-provenance";
    case ErrorKind::NotEncodablePair: return "not-encodable-pair";
    case ErrorKind::FilterSyntax: return "filter-syntax-error";
    case ErrorKind::UnknownField: return "unknown-field";
    case ErrorKind::FilterType: return "filter-type-error";
    case ErrorKind::NotSupported: return "not-supported";
    case ErrorKind::MalformedAction: return "malformed-action";
    case ErrorKind::UnknownActionType: return "unknown-action-type";
    case ErrorKind::MissingRequiredParameter: return "missing-required-parameter";
    case ErrorKind::InvalidLimit: return "invalid-limit";
    case ErrorKind::ExpressionSyntax: return "expression-syntax-error";
    case ErrorKind::DivisionByZero: return "division-by-zero";
    case ErrorKind::DisallowedConstruct: return "disallowed-construct";
    case ErrorKind::ExpressionOverflow: return "expression-overflow";
    case ErrorKind::UnknownPaper: return "unknown-paper";
    case ErrorKind::PageOutOfRange: return "page-out-of-range";
    case ErrorKind::DegenerateBox: return "degenerate-box";
    case ErrorKind::VisionNotSupported: return "vision-not-supported";
    case ErrorKind::AuthError: return "auth-error";
    case ErrorKind::RateLimited: return "rate-limited";
    case ErrorKind::NetworkError: return "network-error";
    case ErrorKind::ContextOverflow: return "context-overflow";
    case ErrorKind::ScriptedMismatch: return "scripted-mismatch";
    case ErrorKind::GatewayError: return "gateway-error";
    case ErrorKind::UnknownEvalFunc: return "unknown-eval-func";
    case ErrorKind::BadTag: return "bad-tag";
    case ErrorKind::JudgeUnavailable: return "judge-unavailable";
    case ErrorKind::KwargsMismatch: return "kwargs-mismatch";
    case ErrorKind::UsageError: return "usage-error";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "error";
}

/// All expected failures across the engine carry a machine-readable kind.
/// what() is "<kind>: <message>" so error observations stay informative.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace nsrag
