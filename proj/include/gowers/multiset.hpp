#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/group.hpp"

namespace gowers {

// Finite non-empty multiset in a group.  Entries are collapsed to distinct
// elements with 64-bit multiplicities, sorted by dense index.
struct Multiset {
  GroupSpec group;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;  // (index, mult)
  std::uint64_t total = 0;

  static Multiset from_counts(const GroupSpec& g,
                              std::map<std::uint64_t, std::uint64_t> counts) {
    Multiset m;
    m.group = g;
    m.entries.reserve(counts.size());
    for (auto& [idx, c] : counts) {
      if (c == 0) continue;
      m.entries.emplace_back(idx, c);
      if (m.total > UINT64_MAX - c) throw resource_error("multiset total overflows 64-bit count");
      m.total += c;
    }
    if (m.total == 0) throw argument_error("multiset must be non-empty");
    return m;
  }

  static Multiset from_elements(const GroupSpec& g, const std::vector<GroupElement>& elems) {
    std::map<std::uint64_t, std::uint64_t> counts;
    for (const auto& e : elems) counts[index_of(g, e)]++;
    return from_counts(g, counts);
  }

  static Multiset singleton(const GroupSpec& g, const GroupElement& e) {
    return from_elements(g, {e});
  }

  std::uint64_t multiplicity(std::uint64_t idx) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), idx,
                               [](const auto& p, std::uint64_t v) { return p.first < v; });
    return (it != entries.end() && it->first == idx) ? it->second : 0;
  }
};

// Sumset with multiplicity: mult(x) = sum over u+v=x of mult_a(u) * mult_b(v),
// so total(a+b) = total(a) * total(b).
inline Multiset sumset(const Multiset& a, const Multiset& b) {
  if (a.group != b.group) throw structural_error("sumset: group mismatch");
  if (b.total != 0 && a.total > UINT64_MAX / b.total)
    throw resource_error("sumset total overflows 64-bit count",
                         static_cast<double>(a.total) * static_cast<double>(b.total));
  std::map<std::uint64_t, std::uint64_t> counts;
  for (const auto& [ia, ma] : a.entries)
    for (const auto& [ib, mb] : b.entries)
      counts[index_add(a.group, ia, ib)] += ma * mb;
  return Multiset::from_counts(a.group, counts);
}

inline Multiset negate(const Multiset& a) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (const auto& [i, m] : a.entries) counts[index_neg(a.group, i)] += m;
  return Multiset::from_counts(a.group, counts);
}

inline Multiset difference_set(const Multiset& a, const Multiset& b) {
  return sumset(a, negate(b));
}

}  // namespace gowers
