// SPDX-License-Identifier: Apache-2.0
//
// Line-oriented trace files.
//
//   # lfp-trace 1
//   # <key>=<value>                     header, in the order written
//   <time> <KIND> <actor|-> <coord> <v1,v2,...> [cas=<field>:<expected>]
//
// KIND is READ, WRITE, CAS_FAIL, DELIVER or COMMIT. A COMMIT record sets
// coordinate <coord> of G_<time>; replaying them over the initial state
// rebuilds the committed chain. Events of step or round t come before the
// COMMIT records of time t + 1. Coordinates are 0-based.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lfp/trace.hpp"

namespace lfp {

struct TraceFile {
  std::vector<std::pair<std::string, std::string>> header;
  ExecutionTrace trace;

  /// Empty string when the key is absent.
  std::string get(const std::string& key) const;
};

class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(std::size_t line, const std::string& message)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// `status` and `time_units` are appended to the header from the trace.
void write_trace(std::ostream& out, const TraceFile& file);

/// Rebuilds the trace, seeding the COMMIT replay with `initial`. Throws
/// TraceFormatError on malformed lines or if a record names a coordinate
/// outside `initial`.
TraceFile read_trace(std::istream& in, const StateVector& initial);

}  // namespace lfp
