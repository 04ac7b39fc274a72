#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/group.hpp"
#include "gowers/multiset.hpp"
#include "gowers/rng.hpp"

namespace gowers {

// Symmetric coset progression Q = H + {n1 v1 + ... + nr vr : |ni| <= Ni}.
// Bounds are reals (dilates scale them); enumeration uses floor(Ni).  H is a
// multiset in which every element carries multiplicity 1.
struct CosetProgression {
  GroupSpec group;
  Subgroup subgroup;                    // the H, materialized
  std::vector<GroupElement> generators; // v1..vr
  std::vector<double> bounds;           // N1..Nr, >= 0

  static CosetProgression make(const GroupSpec& g, Subgroup h,
                               std::vector<GroupElement> gens, std::vector<double> bounds) {
    if (gens.size() != bounds.size())
      throw argument_error("coset progression: generator/bound count mismatch");
    for (const auto& v : gens) check_member(g, v);
    for (double b : bounds)
      if (!(b >= 0.0)) throw argument_error("coset progression: bounds must be >= 0");
    if (h.group != g) throw structural_error("coset progression: subgroup group mismatch");
    return CosetProgression{g, std::move(h), std::move(gens), std::move(bounds)};
  }

  // Rank-1 {n * v : |n| <= bound} with trivial H.
  static CosetProgression rank1(const GroupSpec& g, const GroupElement& v, double bound) {
    return make(g, Subgroup::trivial(g), {v}, {bound});
  }

  // Pure subgroup, rank 0.
  static CosetProgression of_subgroup(Subgroup h) {
    GroupSpec g = h.group;
    return make(g, std::move(h), {}, {});
  }

  std::size_t rank() const { return generators.size(); }
};

inline CosetProgression dilate(const CosetProgression& q, double eps) {
  if (!(eps > 0.0)) throw argument_error("dilate: eps must be > 0");
  CosetProgression out = q;
  for (auto& b : out.bounds) b *= eps;
  return out;
}

// Q1 + Q2: subgroup generated by H1 u H2, generators and bounds concatenated.
inline CosetProgression progression_sum(const CosetProgression& q1, const CosetProgression& q2,
                                        std::size_t subgroup_cap = kSubgroupCap) {
  if (q1.group != q2.group) throw structural_error("progression_sum: group mismatch");
  SubgroupSpec joint;
  for (auto idx : q1.subgroup.elements) joint.generators.push_back(element_of(q1.group, idx));
  for (auto idx : q2.subgroup.elements) joint.generators.push_back(element_of(q1.group, idx));
  Subgroup h = Subgroup::closure(q1.group, joint, subgroup_cap);
  std::vector<GroupElement> gens = q1.generators;
  gens.insert(gens.end(), q2.generators.begin(), q2.generators.end());
  std::vector<double> bounds = q1.bounds;
  bounds.insert(bounds.end(), q2.bounds.begin(), q2.bounds.end());
  return CosetProgression::make(q1.group, std::move(h), std::move(gens), std::move(bounds));
}

// The tuple domain H x prod {-floor(Ni)..floor(Ni)} of a progression.  Sums
// are counted with multiplicity, so |Q| always means the index-space size.
struct IndexSpace {
  GroupSpec group;
  std::vector<std::uint64_t> subgroup_elems;        // sorted dense indices
  std::vector<std::int64_t> half_width;             // floor(Ni)
  std::vector<std::vector<std::uint64_t>> axis_step; // axis_step[i][n+w] = idx(n*vi)
  std::uint64_t size = 0;

  static IndexSpace of(const CosetProgression& q) {
    IndexSpace s;
    s.group = q.group;
    s.subgroup_elems = q.subgroup.elements;
    s.size = s.subgroup_elems.size();
    for (std::size_t i = 0; i < q.rank(); ++i) {
      std::int64_t w = static_cast<std::int64_t>(std::floor(q.bounds[i]));
      s.half_width.push_back(w);
      std::uint64_t axis = static_cast<std::uint64_t>(2 * w + 1);
      if (s.size > UINT64_MAX / axis) throw resource_error("index space size overflows");
      s.size *= axis;
      std::vector<std::uint64_t> steps(axis);
      for (std::int64_t n = -w; n <= w; ++n)
        steps[static_cast<std::size_t>(n + w)] = index_of(q.group, scale(q.group, n, q.generators[i]));
      s.axis_step.push_back(std::move(steps));
    }
    return s;
  }

  // Dense index of the element encoded by tuple number t (subgroup slot slowest).
  std::uint64_t element_index(std::uint64_t t) const {
    std::uint64_t acc = 0;
    bool have = false;
    for (std::size_t i = axis_step.size(); i-- > 0;) {
      std::uint64_t axis = static_cast<std::uint64_t>(2 * half_width[i] + 1);
      std::uint64_t term = axis_step[i][t % axis];
      t /= axis;
      acc = have ? index_add(group, acc, term) : term;
      have = true;
    }
    std::uint64_t h = subgroup_elems[t];
    return have ? index_add(group, acc, h) : h;
  }

  GroupElement element_at(std::uint64_t t) const {
    return element_of(group, element_index(t));
  }

  // Uniform draw over tuples (hence multiplicity-weighted over elements),
  // pure in (stream, draw index).
  GroupElement sample(const RngStream& rng, std::uint64_t draw) const {
    if (size == 0) throw argument_error("sample: empty index space");
    return element_at(rng.below(draw, size));
  }

  std::uint64_t sample_index(const RngStream& rng, std::uint64_t draw) const {
    if (size == 0) throw argument_error("sample: empty index space");
    return element_index(rng.below(draw, size));
  }
};

// Histogram of the full index space as a Multiset (the multiset Q names).
inline Multiset enumerate_multiset(const CosetProgression& q,
                                   std::uint64_t cap = (std::uint64_t(1) << 26)) {
  IndexSpace s = IndexSpace::of(q);
  if (s.size > cap)
    throw resource_error("progression enumeration exceeds cap", static_cast<double>(s.size));
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t t = 0; t < s.size; ++t) counts[s.element_index(t)]++;
  return Multiset::from_counts(q.group, counts);
}

}  // namespace gowers
