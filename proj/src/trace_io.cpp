// SPDX-License-Identifier: Apache-2.0
#include "lfp/trace_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace lfp {

namespace {

constexpr const char* kMagic = "# lfp-trace 1";

void put_tuple(std::ostream& out, const Tuple& t) {
  for (std::size_t f = 0; f < t.size(); ++f) out << (f ? "," : "") << t[f];
}

template <typename T>
T number(std::string_view s, std::size_t line, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw TraceFormatError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

Tuple parse_tuple(std::string_view s, std::size_t line) {
  Tuple t;
  while (true) {
    const auto comma = s.find(',');
    if (t.size() == kMaxFields) throw TraceFormatError(line, "tuple has too many fields");
    t.push_back(number<Value>(s.substr(0, comma), line, "value"));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return t;
}

EventKind event_kind(const std::string& s, std::size_t line) {
  for (auto k : {EventKind::kRead, EventKind::kWrite, EventKind::kCasFail, EventKind::kDeliver}) {
    if (s == to_string(k)) return k;
  }
  throw TraceFormatError(line, "unknown record kind '" + s + "'");
}

TerminalStatus status_from(const std::string& s, std::size_t line) {
  for (auto t : {TerminalStatus::kConverged, TerminalStatus::kStepLimit, TerminalStatus::kStuckNonFixpoint}) {
    if (s == to_string(t)) return t;
  }
  throw TraceFormatError(line, "unknown status '" + s + "'");
}

void write_event(std::ostream& out, const TraceEvent& e) {
  out << e.time << ' ' << to_string(e.kind) << ' ' << e.actor << ' ' << e.coordinate << ' ';
  put_tuple(out, e.value);
  if (e.is_cas) out << " cas=" << e.cas_field << ':' << e.cas_expected;
  out << '\n';
}

}  // namespace

std::string TraceFile::get(const std::string& key) const {
  for (const auto& [k, v] : header) {
    if (k == key) return v;
  }
  return {};
}

void write_trace(std::ostream& out, const TraceFile& file) {
  const auto& tr = file.trace;
  out << kMagic << '\n';
  for (const auto& [k, v] : file.header) out << "# " << k << '=' << v << '\n';
  out << "# status=" << to_string(tr.status) << '\n';
  out << "# time_units=" << tr.time_units << '\n';

  std::size_t next_event = 0;
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    const std::size_t t = tr.state_times[k];
    while (next_event < tr.events.size() && tr.events[next_event].time < t) {
      write_event(out, tr.events[next_event++]);
    }
    const auto& prev = tr.states[k - 1];
    const auto& cur = tr.states[k];
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (cur[j] == prev[j]) continue;
      out << t << " COMMIT - " << j << ' ';
      put_tuple(out, cur[j]);
      out << '\n';
    }
  }
  while (next_event < tr.events.size()) write_event(out, tr.events[next_event++]);
}

TraceFile read_trace(std::istream& in, const StateVector& initial) {
  TraceFile file;
  auto& tr = file.trace;
  tr.commit(0, initial);
  StateVector pending = initial;
  std::size_t pending_time = 0;
  bool have_pending = false;
  bool saw_status = false;

  auto flush = [&] {
    if (have_pending) tr.commit(pending_time, pending);
    have_pending = false;
  };

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (line == 1) {
      if (raw != kMagic) throw TraceFormatError(line, "missing '" + std::string(kMagic) + "' header");
      continue;
    }
    if (raw.empty()) continue;
    if (raw.front() == '#') {
      const auto eq = raw.find('=');
      if (raw.size() < 2 || raw[1] != ' ' || eq == std::string::npos) {
        throw TraceFormatError(line, "malformed header line");
      }
      std::string key = raw.substr(2, eq - 2);
      std::string value = raw.substr(eq + 1);
      if (key == "status") {
        tr.status = status_from(value, line);
        saw_status = true;
      } else if (key == "time_units") {
        tr.time_units = number<std::size_t>(value, line, "time_units");
      } else {
        file.header.emplace_back(std::move(key), std::move(value));
      }
      continue;
    }

    std::istringstream fields(raw);
    std::string time_s, kind_s, actor_s, coord_s, value_s, extra;
    if (!(fields >> time_s >> kind_s >> actor_s >> coord_s >> value_s)) {
      throw TraceFormatError(line, "expected <time> <kind> <actor> <coord> <value>");
    }
    const auto time = number<std::size_t>(time_s, line, "time");
    const auto coord = number<std::size_t>(coord_s, line, "coordinate");
    if (coord >= initial.size()) throw TraceFormatError(line, "coordinate out of range");
    const Tuple value = parse_tuple(value_s, line);

    if (kind_s == "COMMIT") {
      if (fields >> extra) throw TraceFormatError(line, "trailing text after COMMIT");
      if (have_pending && time != pending_time) flush();
      if (time <= tr.state_times.back()) throw TraceFormatError(line, "COMMIT times must increase");
      if (!have_pending) {
        pending = tr.terminal();
        pending_time = time;
        have_pending = true;
      }
      pending[coord] = value;
      continue;
    }

    flush();
    TraceEvent e;
    e.time = time;
    e.kind = event_kind(kind_s, line);
    e.actor = number<std::size_t>(actor_s, line, "actor");
    e.coordinate = coord;
    e.value = value;
    if (fields >> extra) {
      const auto colon = extra.find(':');
      if (extra.rfind("cas=", 0) != 0 || colon == std::string::npos) {
        throw TraceFormatError(line, "expected cas=<field>:<expected>");
      }
      e.is_cas = true;
      e.cas_field = number<std::size_t>(std::string_view(extra).substr(4, colon - 4), line, "cas field");
      e.cas_expected = number<Value>(std::string_view(extra).substr(colon + 1), line, "cas value");
      if (fields >> extra) throw TraceFormatError(line, "trailing text");
    }
    tr.events.push_back(std::move(e));
  }
  flush();
  if (line == 0) throw TraceFormatError(1, "empty trace");
  if (!saw_status) throw TraceFormatError(line, "missing status header");
  return file;
}

}  // namespace lfp
