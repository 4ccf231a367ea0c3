// Copyright 2026 The text2mdt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TEXT2MDT_ERROR_HPP
#define TEXT2MDT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace text2mdt {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// A preorder sequence that does not encode exactly one binary tree.
class InvalidTree : public Error {
 public:
  using Error::Error;
};

class PrematureExhaustion : public InvalidTree {
 public:
  explicit PrematureExhaustion(std::size_t condition_index)
      : InvalidTree("condition node " + std::to_string(condition_index) +
                    " has no child left in the preorder sequence"),
        condition_index_(condition_index) {}
  std::size_t condition_index() const noexcept { return condition_index_; }

 private:
  std::size_t condition_index_;
};

class LeftoverNodes : public InvalidTree {
 public:
  explicit LeftoverNodes(std::size_t first_leftover)
      : InvalidTree("nodes remain after the root subtree is complete, first at index " +
                    std::to_string(first_leftover)),
        first_leftover_(first_leftover) {}
  std::size_t first_leftover() const noexcept { return first_leftover_; }

 private:
  std::size_t first_leftover_;
};

class PermutationLimitExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Tree assembly could not connect every node (non-force mode).
class DecodingIncomplete : public Error {
 public:
  DecodingIncomplete(const std::string& what, std::vector<std::size_t> offending)
      : Error(what), offending_(std::move(offending)) {}
  const std::vector<std::size_t>& offending_nodes() const noexcept { return offending_; }

 private:
  std::vector<std::size_t> offending_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IdMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

}  // namespace text2mdt

#endif  // TEXT2MDT_ERROR_HPP
