#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace interest {

/// Base of every error raised by the library. `code()` is a stable
/// machine-readable identifier that the service and CLI surface verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error("bad_request", message) {}
};

class IoFailure : public Error {
 public:
  explicit IoFailure(const std::string& message) : Error("io_failure", message) {}
};

class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line, const std::string& message)
      : Error("MalformedLine", "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownProfile : public Error {
 public:
  explicit UnknownProfile(const std::string& name)
      : Error("unknown_profile", "unknown profile '" + name + "'") {}
};

class UnknownConnector : public Error {
 public:
  explicit UnknownConnector(const std::string& name)
      : Error("unknown_connector", "unknown connector '" + name + "'") {}
};

class UnknownScorer : public Error {
 public:
  explicit UnknownScorer(const std::string& name)
      : Error("unknown_scorer", "unknown scorer '" + name + "' (valid scorers: mm, tfidf)") {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("empty_corpus", "corpus statistics need at least one document") {}
};

class EmptyResultSet : public Error {
 public:
  EmptyResultSet() : Error("empty_result_set", "result set is empty") {}
};

class DuplicateResult : public Error {
 public:
  explicit DuplicateResult(const std::string& what) : Error("duplicate_result", what) {}
};

class DegeneratePairing : public Error {
 public:
  explicit DegeneratePairing(const std::string& what) : Error("degenerate_pairing", what) {}
};

class InvalidPairing : public Error {
 public:
  explicit InvalidPairing(const std::string& what) : Error("invalid_pairing", what) {}
};

class IdMismatch : public Error {
 public:
  explicit IdMismatch(const std::string& what) : Error("id_mismatch", what) {}
};

class ConnectorUnavailable : public Error {
 public:
  explicit ConnectorUnavailable(const std::string& cause)
      : Error("connector_unavailable", cause) {}
};

class MalformedResponse : public Error {
 public:
  explicit MalformedResponse(const std::string& what) : Error("malformed_response", what) {}
};

class InvalidConnectorSpec : public Error {
 public:
  explicit InvalidConnectorSpec(const std::string& what)
      : Error("invalid_connector_spec", what) {}
};

}  // namespace interest
