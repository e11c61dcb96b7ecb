//
// This file is distributed under the Apache License v2.0. See LICENSE for
// details.
//
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pathharden {

// MiniLang strings are byte strings; std::string here always means raw bytes.
using Bytes = std::string;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

struct SourceSpan {
  std::uint32_t line = 0;    // 1-based
  std::uint32_t column = 0;  // 1-based, in bytes
  std::size_t offset = 0;    // byte offset into the source text

  bool operator==(const SourceSpan&) const = default;
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::string message, SourceSpan span)
      : Error(message + " (line " + std::to_string(span.line) + ", column " +
              std::to_string(span.column) + ")"),
        message_(std::move(message)),
        span_(span) {}

  const std::string& message() const { return message_; }
  SourceSpan span() const { return span_; }

 private:
  std::string message_;
  SourceSpan span_;
};

class ConfigMismatch : public Error {
 public:
  using Error::Error;
};

class GeneratorMismatch : public Error {
 public:
  using Error::Error;
};

class ClassificationMismatch : public Error {
 public:
  using Error::Error;
};

class TypeFault : public Error {
 public:
  using Error::Error;
};

std::string to_hex(std::string_view bytes);
std::string to_hex(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);  // throws Error on bad input

}  // namespace pathharden
