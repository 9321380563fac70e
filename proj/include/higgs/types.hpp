// Copyright 2026 The HIGGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace higgs {

using VertexId = std::uint64_t;
using Timestamp = std::uint64_t;
using Weight = std::uint64_t;

/// One item of a graph stream: a directed weighted edge observed at a
/// time-slice.
struct StreamEdge {
  VertexId src = 0;
  VertexId dst = 0;
  Weight weight = 1;
  Timestamp time = 0;

  friend bool operator==(const StreamEdge&, const StreamEdge&) = default;
};

/// Closed interval [start, end] of time-slices.
struct TemporalRange {
  Timestamp start = 0;
  Timestamp end = 0;

  TemporalRange() = default;
  TemporalRange(Timestamp s, Timestamp e) : start(s), end(e) {
    if (s > e) throw std::invalid_argument("temporal range start exceeds end");
  }

  bool contains(Timestamp t) const { return start <= t && t <= end; }
  bool covers(const TemporalRange& o) const {
    return start <= o.start && o.end <= end;
  }
  bool overlaps(const TemporalRange& o) const {
    return start <= o.end && o.start <= end;
  }
  std::uint64_t length() const { return end - start; }

  std::optional<TemporalRange> intersect(const TemporalRange& o) const {
    if (!overlaps(o)) return std::nullopt;
    return TemporalRange(std::max(start, o.start), std::min(end, o.end));
  }

  friend bool operator==(const TemporalRange&, const TemporalRange&) = default;
};

enum class Direction { kOut, kIn };

// Error hierarchy. Every failure surfaced by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class UnderflowError : public Error {
 public:
  using Error::Error;
};

class LevelCapError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace higgs
