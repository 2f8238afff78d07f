// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <memory>
#include <string>

#include "lfp/errors.hpp"
#include "lfp/problems.hpp"

namespace lfp {

namespace {

void require_permutation(const std::vector<std::size_t>& row, std::size_t n, const std::string& who) {
  if (row.size() != n) throw InvalidInstance(who + " must rank exactly " + std::to_string(n) + " people");
  std::vector<bool> seen(n, false);
  for (auto x : row) {
    if (x >= n || seen[x]) throw InvalidInstance(who + " is not a permutation of 1.." + std::to_string(n));
    seen[x] = true;
  }
}

}  // namespace

PreferenceProfile PreferenceProfile::from_lists(std::vector<std::vector<std::size_t>> men,
                                                const std::vector<std::vector<std::size_t>>& women) {
  PreferenceProfile p;
  p.n = men.size();
  if (women.size() != p.n) throw InvalidInstance("profile needs as many women as men");
  for (std::size_t w = 0; w < p.n; ++w) {
    require_permutation(women[w], p.n, "woman " + std::to_string(w + 1));
  }
  p.mpref = std::move(men);
  p.rank.assign(p.n, std::vector<std::size_t>(p.n, 0));
  for (std::size_t w = 0; w < p.n; ++w) {
    for (std::size_t k = 0; k < p.n; ++k) p.rank[w][women[w][k]] = k;
  }
  p.validate();
  return p;
}

std::vector<std::vector<std::size_t>> PreferenceProfile::women_lists() const {
  std::vector<std::vector<std::size_t>> lists(n, std::vector<std::size_t>(n, 0));
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t m = 0; m < n; ++m) lists[w][rank[w][m]] = m;
  }
  return lists;
}

void PreferenceProfile::validate() const {
  if (n == 0) throw InvalidInstance("profile needs at least one man");
  if (mpref.size() != n || rank.size() != n) throw InvalidInstance("profile size mismatch");
  for (std::size_t i = 0; i < n; ++i) require_permutation(mpref[i], n, "man " + std::to_string(i + 1));
  for (std::size_t w = 0; w < n; ++w) {
    require_permutation(rank[w], n, "rank row of woman " + std::to_string(w + 1));
  }
}

FunctionFamily stable_marriage_family(const PreferenceProfile& p,
                                      std::optional<std::pair<std::size_t, std::size_t>> forced) {
  p.validate();
  const std::size_t n = p.n;
  if (forced && (forced->first >= n || forced->second >= n)) {
    throw InvalidInstance("forced pair names someone outside the profile");
  }
  // pos[j][w]: 1-based position of woman w in man j's list.
  auto pos = std::make_shared<std::vector<std::vector<Value>>>(n, std::vector<Value>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) (*pos)[j][p.mpref[j][k]] = static_cast<Value>(k) + 1;
  }
  auto prof = std::make_shared<const PreferenceProfile>(p);

  FunctionFamily fam;
  fam.name = forced ? "stable_marriage_constrained" : "stable_marriage";
  fam.bounds = Bounds::uniform(n, {{"proposal", static_cast<Value>(n) + 1, Orientation::kAscending}});
  fam.initial = StateVector::scalars(std::vector<Value>(n, 0));

  std::vector<std::size_t> everyone(n);
  for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
  for (std::size_t i = 0; i < n; ++i) {
    UpdateFunction f;
    f.id = i;
    f.read_set = everyone;
    f.write_set = {i};
    f.evaluate = [prof, pos, forced, i, n](const StateVector& s, WriteList& out) {
      const Value gi = s[i][0];
      if (gi == 0) {
        out.push_back(IntendedWrite::plain(i, Tuple{1}));
        return;
      }
      if (gi > static_cast<Value>(n)) return;
      const std::size_t w = prof->mpref[i][static_cast<std::size_t>(gi) - 1];
      const auto advance = [&] { out.push_back(IntendedWrite::plain(i, Tuple{gi + 1})); };
      if (forced && i == forced->first && w != forced->second) return advance();
      // Some man w prefers has reached her in his list. The forced man only
      // counts as having proposed to his forced partner.
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || prof->rank[w][j] >= prof->rank[w][i]) continue;
        if ((*pos)[j][w] > s[j][0]) continue;
        if (forced && j == forced->first && w != forced->second) continue;
        return advance();
      }
    };
    fam.functions.push_back(std::move(f));
  }
  fam.decode = [prof](const StateVector& s) {
    const auto m = decode_matching(s, *prof);
    if (!m) return Answer{{"status", "INFEASIBLE"}};
    Answer wives = Answer::array();
    for (auto w : *m) wives.push_back(w + 1);
    return Answer{{"status", "STABLE"}, {"matching", std::move(wives)}};
  };
  return fam;
}

std::optional<std::vector<std::size_t>> decode_matching(const StateVector& s,
                                                        const PreferenceProfile& p) {
  std::vector<std::size_t> wife(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    const Value g = s[i][0];
    if (g < 1 || g > static_cast<Value>(p.n)) return std::nullopt;
    wife[i] = p.mpref[i][static_cast<std::size_t>(g) - 1];
  }
  return wife;
}

}  // namespace lfp
