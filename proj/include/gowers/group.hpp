#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gowers/common.hpp"

namespace gowers {

// Finite abelian group presented as Z/N1 x ... x Z/Nk.  Elements are stored
// reduced; the dense index is mixed-radix with the LAST coordinate fastest,
// which fixes the memory layout of all function tables.
struct GroupSpec {
  std::vector<std::int64_t> moduli;
  std::uint64_t order = 1;

  GroupSpec() = default;

  static GroupSpec product(std::vector<std::int64_t> mods) {
    if (mods.empty()) throw argument_error("group needs at least one modulus");
    GroupSpec g;
    g.moduli = std::move(mods);
    g.order = 1;
    for (auto m : g.moduli) {
      if (m < 1) throw argument_error("group modulus must be >= 1");
      if (g.order > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(m))
        throw resource_error("group order exceeds 64-bit count");
      g.order *= static_cast<std::uint64_t>(m);
    }
    return g;
  }

  static GroupSpec cyclic(std::int64_t n) { return product({n}); }

  std::size_t arity() const { return moduli.size(); }

  bool operator==(const GroupSpec& o) const { return moduli == o.moduli; }
  bool operator!=(const GroupSpec& o) const { return !(*this == o); }
};

struct GroupElement {
  std::vector<std::int64_t> residues;

  bool operator==(const GroupElement& o) const { return residues == o.residues; }
  bool operator<(const GroupElement& o) const { return residues < o.residues; }
};

inline void check_member(const GroupSpec& g, const GroupElement& e) {
  if (e.residues.size() != g.moduli.size())
    throw structural_error("element dimension does not match group");
  for (std::size_t i = 0; i < g.moduli.size(); ++i)
    if (e.residues[i] < 0 || e.residues[i] >= g.moduli[i])
      throw structural_error("element residue out of range");
}

inline GroupElement zero(const GroupSpec& g) {
  return GroupElement{std::vector<std::int64_t>(g.arity(), 0)};
}

// Reduces arbitrary integer coordinates into the group.
inline GroupElement reduce(const GroupSpec& g, std::vector<std::int64_t> coords) {
  if (coords.size() != g.arity())
    throw structural_error("coordinate dimension does not match group");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    std::int64_t m = g.moduli[i];
    std::int64_t r = coords[i] % m;
    if (r < 0) r += m;
    coords[i] = r;
  }
  return GroupElement{std::move(coords)};
}

inline GroupElement add(const GroupSpec& g, const GroupElement& a, const GroupElement& b) {
  if (a.residues.size() != b.residues.size() || a.residues.size() != g.arity())
    throw structural_error("add: dimension mismatch");
  GroupElement out;
  out.residues.resize(g.arity());
  for (std::size_t i = 0; i < g.arity(); ++i) {
    std::int64_t s = a.residues[i] + b.residues[i];
    if (s >= g.moduli[i]) s -= g.moduli[i];
    out.residues[i] = s;
  }
  return out;
}

inline GroupElement neg(const GroupSpec& g, const GroupElement& a) {
  if (a.residues.size() != g.arity()) throw structural_error("neg: dimension mismatch");
  GroupElement out;
  out.residues.resize(g.arity());
  for (std::size_t i = 0; i < g.arity(); ++i)
    out.residues[i] = a.residues[i] == 0 ? 0 : g.moduli[i] - a.residues[i];
  return out;
}

inline GroupElement sub(const GroupSpec& g, const GroupElement& a, const GroupElement& b) {
  return add(g, a, neg(g, b));
}

inline GroupElement scale(const GroupSpec& g, std::int64_t n, const GroupElement& a) {
  GroupElement out;
  out.residues.resize(g.arity());
  for (std::size_t i = 0; i < g.arity(); ++i) {
    std::int64_t m = g.moduli[i];
    // n may be negative; (n mod m) * (a mod m) stays within int64 for desk-scale moduli.
    std::int64_t nn = n % m;
    if (nn < 0) nn += m;
    out.residues[i] = static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(nn) * static_cast<std::uint64_t>(a.residues[i])) % m);
  }
  return out;
}

// Mixed-radix dense index, last coordinate fastest.
inline std::uint64_t index_of(const GroupSpec& g, const GroupElement& e) {
  check_member(g, e);
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < g.arity(); ++i)
    idx = idx * static_cast<std::uint64_t>(g.moduli[i]) +
          static_cast<std::uint64_t>(e.residues[i]);
  return idx;
}

inline GroupElement element_of(const GroupSpec& g, std::uint64_t idx) {
  if (idx >= g.order) throw argument_error("element index out of range");
  GroupElement e;
  e.residues.resize(g.arity());
  for (std::size_t i = g.arity(); i-- > 0;) {
    std::uint64_t m = static_cast<std::uint64_t>(g.moduli[i]);
    e.residues[i] = static_cast<std::int64_t>(idx % m);
    idx /= m;
  }
  return e;
}

// Dense-index arithmetic without materializing elements: index of (a - b).
inline std::uint64_t index_sub(const GroupSpec& g, std::uint64_t a, std::uint64_t b) {
  std::uint64_t idx = 0;
  // Walk radices from the fast end, recombine from the slow end.
  std::size_t k = g.arity();
  std::uint64_t mult = 1;
  for (std::size_t i = k; i-- > 0;) {
    std::uint64_t m = static_cast<std::uint64_t>(g.moduli[i]);
    std::uint64_t ra = a % m, rb = b % m;
    a /= m;
    b /= m;
    std::uint64_t r = ra >= rb ? ra - rb : ra + m - rb;
    idx += r * mult;
    mult *= m;
  }
  return idx;
}

inline std::uint64_t index_add(const GroupSpec& g, std::uint64_t a, std::uint64_t b) {
  std::uint64_t idx = 0;
  std::size_t k = g.arity();
  std::uint64_t mult = 1;
  for (std::size_t i = k; i-- > 0;) {
    std::uint64_t m = static_cast<std::uint64_t>(g.moduli[i]);
    std::uint64_t r = (a % m) + (b % m);
    if (r >= m) r -= m;
    a /= m;
    b /= m;
    idx += r * mult;
    mult *= m;
  }
  return idx;
}

inline std::uint64_t index_neg(const GroupSpec& g, std::uint64_t a) {
  return index_sub(g, 0, a);
}

struct SubgroupSpec {
  std::vector<GroupElement> generators;
};

inline constexpr std::size_t kSubgroupCap = std::size_t(1) << 20;

// Closure of the generators under + and -, always containing 0.  Returned as
// a sorted list of dense indices (the materialized form used everywhere).
inline std::vector<std::uint64_t> enumerate_subgroup(const GroupSpec& g,
                                                     const SubgroupSpec& s,
                                                     std::size_t cap = kSubgroupCap) {
  for (const auto& e : s.generators) check_member(g, e);
  std::set<std::uint64_t> seen{0};
  std::vector<std::uint64_t> frontier{0};
  std::vector<std::uint64_t> gens;
  gens.reserve(s.generators.size() * 2);
  for (const auto& e : s.generators) {
    gens.push_back(index_of(g, e));
    gens.push_back(index_of(g, neg(g, e)));
  }
  while (!frontier.empty()) {
    std::uint64_t x = frontier.back();
    frontier.pop_back();
    for (std::uint64_t ge : gens) {
      std::uint64_t y = index_add(g, x, ge);
      if (seen.insert(y).second) {
        if (seen.size() > cap)
          throw resource_error("subgroup closure exceeds cap of " + std::to_string(cap),
                               static_cast<double>(cap));
        frontier.push_back(y);
      }
    }
  }
  return std::vector<std::uint64_t>(seen.begin(), seen.end());
}

// A materialized subgroup: sorted element indices plus membership lookup.
struct Subgroup {
  GroupSpec group;
  std::vector<std::uint64_t> elements;  // sorted dense indices, contains 0

  static Subgroup closure(const GroupSpec& g, const SubgroupSpec& s,
                          std::size_t cap = kSubgroupCap) {
    return Subgroup{g, enumerate_subgroup(g, s, cap)};
  }

  static Subgroup trivial(const GroupSpec& g) { return Subgroup{g, {0}}; }

  static Subgroup whole(const GroupSpec& g) {
    std::vector<std::uint64_t> all(g.order);
    for (std::uint64_t i = 0; i < g.order; ++i) all[i] = i;
    return Subgroup{g, std::move(all)};
  }

  std::size_t size() const { return elements.size(); }

  bool contains(std::uint64_t idx) const {
    return std::binary_search(elements.begin(), elements.end(), idx);
  }
};

}  // namespace gowers
