// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <memory>
#include <string>

#include "lfp/errors.hpp"
#include "lfp/problems.hpp"

namespace lfp {

Value SubsidyInstance::delta() const {
  Value d = 0;
  for (const auto& row : values) {
    for (Value v : row) d = std::max(d, v);
  }
  return d;
}

Value SubsidyInstance::cap() const { return static_cast<Value>(agents()) * delta(); }

void SubsidyInstance::validate() const {
  const std::size_t n = agents();
  if (n == 0) throw InvalidInstance("subsidy instance needs at least one agent");
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i].size() != n) throw InvalidInstance("valuation matrix must be square");
    for (Value v : values[i]) {
      if (v < 0) throw InvalidInstance("valuations must be non-negative");
    }
  }
  // Longest envy paths of at most n edges; any gain in a further pass means
  // a positive cycle, so no payment vector removes all envy.
  std::vector<Value> reach(n, 0);
  for (std::size_t pass = 0; pass <= n; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Value via = values[i][j] - values[i][i] + reach[j];
        if (via > reach[i]) {
          reach[i] = via;
          changed = true;
        }
      }
    }
    if (!changed) return;
  }
  throw InvalidInstance("allocation is not envy-freeable: the envy graph has a positive cycle");
}

FunctionFamily subsidy_family(const SubsidyInstance& inst) {
  inst.validate();
  const std::size_t n = inst.agents();
  const Value cap = inst.cap();
  auto data = std::make_shared<const SubsidyInstance>(inst);

  FunctionFamily fam;
  fam.name = "subsidy";
  fam.bounds = Bounds::uniform(n, {{"payment", cap, Orientation::kAscending}});
  fam.initial = StateVector::scalars(std::vector<Value>(n, 0));
  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
  for (std::size_t i = 0; i < n; ++i) {
    UpdateFunction f;
    f.id = i;
    f.read_set = everyone;
    f.write_set = {i};
    f.evaluate = [data, i, n, cap](const StateVector& s, WriteList& out) {
      const auto& v = data->values[i];
      Value max_envy = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) max_envy = std::max(max_envy, v[j] + s[j][0] - (v[i] + s[i][0]));
      }
      if (max_envy > 0) out.push_back(IntendedWrite::plain(i, Tuple{std::min(s[i][0] + max_envy, cap)}));
    };
    fam.functions.push_back(std::move(f));
  }
  fam.decode = [](const StateVector& s) { return Answer{{"payments", decode_payments(s)}}; };
  return fam;
}

std::vector<Value> decode_payments(const StateVector& s) {
  std::vector<Value> p;
  for (const auto& t : s) p.push_back(t[0]);
  return p;
}

}  // namespace lfp
