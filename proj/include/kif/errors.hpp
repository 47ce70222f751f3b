#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kif {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value violates one of the data model invariants.
class InvalidValue : public Error {
public:
    using Error::Error;
};

// Text input (S-expression, N-Triples, SPARQL) could not be parsed.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(message + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// SPARQL text uses a construct outside the supported subset.
class UnsupportedQuery : public ParseError {
public:
    using ParseError::ParseError;
};

// A filter pattern uses a fingerprint the backend cannot evaluate.
class UnsupportedFingerprint : public Error {
public:
    using Error::Error;
};

// A model object cannot be represented in the Wikidata RDF dialect.
class EncodeError : public Error {
public:
    using Error::Error;
};

// Network failure or non-success HTTP status while talking to an endpoint.
class TransportError : public Error {
public:
    TransportError(const std::string& message, std::string url, int status = 0)
        : Error(message), url_(std::move(url)), status_(status) {}

    const std::string& url() const noexcept { return url_; }
    int status() const noexcept { return status_; }

private:
    std::string url_;
    int status_;
};

} // namespace kif
