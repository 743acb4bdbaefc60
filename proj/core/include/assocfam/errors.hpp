#pragma once

#include <stdexcept>
#include <string>

namespace assocfam {

/// Base class for every recoverable failure raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its analytic domain or a point left its chart.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateImmersion : public Error {
 public:
  using Error::Error;
};

/// Induced metric is not positive definite.
class SignatureError : public Error {
 public:
  using Error::Error;
};

class LightlikeNormal : public Error {
 public:
  using Error::Error;
};

/// The f_theta constraint has a negative radicand.
class NoRealSolution : public Error {
 public:
  using Error::Error;
};

/// An obstruction identity was requested outside the case it is valid for.
class CaseViolation : public Error {
 public:
  using Error::Error;
};

class UmbilicalPoint : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownEntry : public Error {
 public:
  using Error::Error;
};

class ParamOutOfRange : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

/// Programming error: a documented precondition of an API call was broken.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace assocfam
