#pragma once

#include <stdexcept>
#include <string>

namespace ocnet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A well-formed input that breaks a domain invariant (self-loop, disconnected graph, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownTopology : public Error {
 public:
  explicit UnknownTopology(const std::string& name) : Error("unknown topology '" + name + "'") {}
};

class UnknownLink : public Error {
 public:
  explicit UnknownLink(int id) : Error("unknown link id " + std::to_string(id)) {}
};

/// Two lightpaths that are not coding partners claim the same (link, wavelength).
class CollisionError : public Error {
 public:
  using Error::Error;
};

class NoPath : public Error {
 public:
  using Error::Error;
};

class NoDisjointPair : public Error {
 public:
  using Error::Error;
};

class NoWavelength : public Error {
 public:
  using Error::Error;
};

/// A demand that no (candidate pair, wavelength) combination can host.
class Blocked : public Error {
 public:
  Blocked(int demand_id, const std::string& what) : Error(what), demand_id_(demand_id) {}
  int demand_id() const { return demand_id_; }

 private:
  int demand_id_;
};

/// A coding opportunity that no longer holds against the current solution.
class Stale : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class NonBinaryValue : public Error {
 public:
  using Error::Error;
};

class InconsistentSupport : public Error {
 public:
  using Error::Error;
};

}  // namespace ocnet
