#pragma once

#include <stdexcept>
#include <string>

namespace hyloc {

// Root of the library's exception hierarchy. Well-formedness problems in
// user input are reported as diagnostics instead; these are raised when an
// operation is called outside its precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsortedTerm : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

class UnboundName : public Error {
 public:
  using Error::Error;
};

class SymbolNotInDomain : public Error {
 public:
  using Error::Error;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class BoundsTooLarge : public Error {
 public:
  using Error::Error;
};

class EncodingFailure : public Error {
 public:
  using Error::Error;
};

class UnsanitizableIdentifier : public EncodingFailure {
 public:
  using EncodingFailure::EncodingFailure;
};

}  // namespace hyloc
