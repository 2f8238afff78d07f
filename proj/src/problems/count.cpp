// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <memory>

#include "lfp/problems.hpp"

namespace lfp {

FunctionFamily count_greater_family(const CountInstance& inst) {
  const std::size_t m = inst.a.size();
  const std::size_t sum = m;  // coordinate of the counter
  const auto top = static_cast<Value>(m);
  auto data = std::make_shared<const CountInstance>(inst);

  FunctionFamily fam;
  fam.name = "count_greater";
  std::vector<std::vector<FieldSpec>> layouts{{{"checked", 1, Orientation::kAscending}},
                                              {{"sum", top, Orientation::kAscending}}};
  std::vector<std::uint32_t> layout_of(m, 0);
  layout_of.push_back(1);
  fam.bounds = Bounds(std::move(layouts), std::move(layout_of));
  fam.initial = StateVector::scalars(std::vector<Value>(m + 1, 0));

  for (std::size_t i = 0; i < m; ++i) {
    UpdateFunction f;
    f.id = i;
    f.read_set = {i, sum};
    f.write_set = {i, sum};
    f.declared.i_local = false;
    f.evaluate = [data, i, sum, top](const StateVector& s, WriteList& out) {
      if (s[i][0] == 1) return;
      if (data->a[i] > data->c) {
        const Value temp = s[sum][0];
        out.push_back(IntendedWrite::compare_and_set(sum, Tuple{std::min(temp + 1, top)}, 0, temp));
      }
      out.push_back(IntendedWrite::plain(i, Tuple{1}));
    };
    fam.functions.push_back(std::move(f));
  }
  // Outside these states the counter disagrees with the bits it counts and
  // the functions are not monotone.
  fam.domain = [data, m, sum](const StateVector& s) {
    Value counted = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (s[i][0] == 1 && data->a[i] > data->c) ++counted;
    }
    return counted == s[sum][0];
  };
  fam.decode = [](const StateVector& s) { return Answer{{"count", decode_count(s)}}; };
  return fam;
}

Value decode_count(const StateVector& s) { return s[s.size() - 1][0]; }

}  // namespace lfp
