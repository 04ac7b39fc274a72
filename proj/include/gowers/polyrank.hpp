#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/group.hpp"
#include "gowers/rng.hpp"

namespace gowers {

// Function P: G -> K with K either Z/M (exact integer arithmetic) or the
// real torus R/Z (doubles in [0,1), zero-tested against a tolerance).
struct PolyFunction {
  GroupSpec domain;
  std::int64_t modulus = 0;  // > 0: Z/M; 0: torus
  std::vector<std::int64_t> ivalues;
  std::vector<double> tvalues;

  static PolyFunction modular(const GroupSpec& g, std::int64_t m, std::vector<std::int64_t> vals) {
    if (m < 1) throw argument_error("poly codomain modulus must be >= 1");
    if (vals.size() != g.order) throw argument_error("poly table length != group order");
    for (auto& v : vals) {
      v %= m;
      if (v < 0) v += m;
    }
    return PolyFunction{g, m, std::move(vals), {}};
  }

  static PolyFunction torus(const GroupSpec& g, std::vector<double> vals) {
    if (vals.size() != g.order) throw argument_error("poly table length != group order");
    for (auto& v : vals) {
      v = std::fmod(v, 1.0);
      if (v < 0) v += 1.0;
    }
    return PolyFunction{g, 0, {}, std::move(vals)};
  }

  bool is_modular() const { return modulus > 0; }

  bool is_zero(double tol = 1e-9) const {
    if (is_modular()) {
      for (auto v : ivalues)
        if (v != 0) return false;
      return true;
    }
    for (auto v : tvalues) {
      double dist = std::min(v, 1.0 - v);  // distance to 0 on the torus
      if (dist > tol) return false;
    }
    return true;
  }
};

// P_h(x) = P(x + h) - P(x); exact in the codomain arithmetic.
inline PolyFunction additive_difference(const PolyFunction& p, const GroupElement& h) {
  check_member(p.domain, h);
  std::uint64_t hi = index_of(p.domain, h);
  PolyFunction out = p;
  if (p.is_modular()) {
    for (std::uint64_t x = 0; x < p.domain.order; ++x) {
      std::uint64_t xh = index_add(p.domain, x, hi);
      std::int64_t v = p.ivalues[xh] - p.ivalues[x];
      if (v < 0) v += p.modulus;
      out.ivalues[x] = v;
    }
  } else {
    for (std::uint64_t x = 0; x < p.domain.order; ++x) {
      std::uint64_t xh = index_add(p.domain, x, hi);
      double v = p.tvalues[xh] - p.tvalues[x];
      if (v < 0) v += 1.0;
      out.tvalues[x] = v;
    }
  }
  return out;
}

struct PolyWitness {
  std::vector<GroupElement> hs;
  GroupElement x;
};

struct PolyCertificate {
  bool verdict = false;
  std::optional<PolyWitness> witness;
  std::uint64_t checked_tuples = 0;
  bool statistical = false;  // true when produced by random subsampling
};

enum class CheckMode { recursive, difference };

inline constexpr double kPolyBudget = 1e8;

namespace polydetail {

inline std::optional<std::uint64_t> first_nonzero(const PolyFunction& p) {
  if (p.is_modular()) {
    for (std::uint64_t x = 0; x < p.domain.order; ++x)
      if (p.ivalues[x] != 0) return x;
    return std::nullopt;
  }
  for (std::uint64_t x = 0; x < p.domain.order; ++x) {
    double v = p.tvalues[x];
    if (std::min(v, 1.0 - v) > 1e-9) return x;
  }
  return std::nullopt;
}

// In-place difference by dense index, reusing a scratch table.
inline void difference_into(const PolyFunction& p, std::uint64_t hi, PolyFunction& out) {
  out.domain = p.domain;
  out.modulus = p.modulus;
  if (p.is_modular()) {
    out.ivalues.resize(p.ivalues.size());
    for (std::uint64_t x = 0; x < p.domain.order; ++x) {
      std::int64_t v = p.ivalues[index_add(p.domain, x, hi)] - p.ivalues[x];
      if (v < 0) v += p.modulus;
      out.ivalues[x] = v;
    }
  } else {
    out.tvalues.resize(p.tvalues.size());
    for (std::uint64_t x = 0; x < p.domain.order; ++x) {
      double v = p.tvalues[index_add(p.domain, x, hi)] - p.tvalues[x];
      if (v < 0) v += 1.0;
      out.tvalues[x] = v;
    }
  }
}

// Difference mode for the degree check: iterated differences along H vanish
// for every d-tuple.  Operators commute, so non-decreasing tuples suffice;
// the witness is still a genuine tuple.
inline bool degree_diff_rec(const PolyFunction& cur, const Subgroup& h, int d,
                            std::size_t min_pos, std::vector<std::size_t>& picks,
                            std::uint64_t& checked, PolyCertificate& cert) {
  if (d == 0) {
    ++checked;
    if (auto x = first_nonzero(cur)) {
      PolyWitness w;
      for (auto pos : picks)
        w.hs.push_back(element_of(cur.domain, h.elements[pos]));
      w.x = element_of(cur.domain, *x);
      cert.witness = std::move(w);
      return false;
    }
    return true;
  }
  PolyFunction next;
  for (std::size_t pos = min_pos; pos < h.elements.size(); ++pos) {
    difference_into(cur, h.elements[pos], next);
    picks.push_back(pos);
    if (!degree_diff_rec(next, h, d - 1, pos, picks, checked, cert)) return false;
    picks.pop_back();
  }
  return true;
}

// Literal recursion of the degree definition: P has degree < d iff for each
// h in H the difference P_h has degree < d-1.
inline bool degree_recursive(const PolyFunction& p, const Subgroup& h, int d) {
  if (d <= 0) return !polydetail::first_nonzero(p).has_value();
  PolyFunction next;
  for (std::uint64_t hi : h.elements) {
    difference_into(p, hi, next);
    if (!degree_recursive(next, h, d - 1)) return false;
  }
  return true;
}

// Rank difference mode: one difference from each listed subgroup, in order.
inline bool rank_diff_rec(const PolyFunction& cur, const std::vector<Subgroup>& hs,
                          std::size_t level, std::vector<std::uint64_t>& picks,
                          std::uint64_t& checked, PolyCertificate& cert) {
  if (level == hs.size()) {
    ++checked;
    if (auto x = first_nonzero(cur)) {
      PolyWitness w;
      for (auto idx : picks) w.hs.push_back(element_of(cur.domain, idx));
      w.x = element_of(cur.domain, *x);
      cert.witness = std::move(w);
      return false;
    }
    return true;
  }
  PolyFunction next;
  for (std::uint64_t hi : hs[level].elements) {
    difference_into(cur, hi, next);
    picks.push_back(hi);
    if (!rank_diff_rec(next, hs, level + 1, picks, checked, cert)) return false;
    picks.pop_back();
  }
  return true;
}

// Literal recursion of the rank definition: for every i and h in H_i, the
// difference has rank < with H_i removed.
inline bool rank_recursive(const PolyFunction& p, const std::vector<Subgroup>& hs) {
  if (hs.empty()) return !polydetail::first_nonzero(p).has_value();
  PolyFunction next;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    std::vector<Subgroup> rest;
    rest.reserve(hs.size() - 1);
    for (std::size_t j = 0; j < hs.size(); ++j)
      if (j != i) rest.push_back(hs[j]);
    for (std::uint64_t hi : hs[i].elements) {
      difference_into(p, hi, next);
      if (!rank_recursive(next, rest)) return false;
    }
  }
  return true;
}

inline void check_budget(double hcount, int d, double order, double budget) {
  double est = order;
  for (int i = 0; i < d; ++i) est *= hcount;
  if (est > budget)
    throw resource_error("exhaustive polynomial check exceeds budget; use sampled mode", est);
}

}  // namespace polydetail

// Is P a polynomial of degree < d along H?
inline PolyCertificate degree_check(const PolyFunction& p, const Subgroup& h, int d,
                                    CheckMode mode = CheckMode::difference,
                                    double budget = kPolyBudget) {
  if (h.group != p.domain) throw structural_error("degree_check: subgroup group mismatch");
  PolyCertificate cert;
  if (d <= 0) {
    auto x = polydetail::first_nonzero(p);
    cert.verdict = !x.has_value();
    cert.checked_tuples = 1;
    if (x) cert.witness = PolyWitness{{}, element_of(p.domain, *x)};
    return cert;
  }
  polydetail::check_budget(static_cast<double>(h.size()), d,
                           static_cast<double>(p.domain.order), budget);
  if (mode == CheckMode::difference) {
    std::vector<std::size_t> picks;
    cert.verdict = polydetail::degree_diff_rec(p, h, d, 0, picks, cert.checked_tuples, cert);
  } else {
    cert.verdict = polydetail::degree_recursive(p, h, d);
    cert.checked_tuples = static_cast<std::uint64_t>(std::pow(static_cast<double>(h.size()), d));
    if (!cert.verdict) {
      // recover a witness with the difference walk for a re-verifiable record
      PolyCertificate diff = degree_check(p, h, d, CheckMode::difference, budget);
      cert.witness = diff.witness;
    }
  }
  return cert;
}

// Randomized subsampling fallback: verdict "no counterexample found".
inline PolyCertificate degree_check_sampled(const PolyFunction& p, const Subgroup& h, int d,
                                            std::uint64_t samples, std::uint64_t seed) {
  if (d < 0) throw argument_error("degree_check_sampled: d must be >= 0");
  PolyCertificate cert;
  cert.statistical = true;
  RngStream rng = make_stream(seed, 0x706f6c79ull);
  PolyFunction cur, next;
  for (std::uint64_t s = 0; s < samples; ++s) {
    cur = p;
    std::vector<std::uint64_t> picks;
    for (int i = 0; i < d; ++i) {
      std::uint64_t hi = h.elements[rng.below(s * static_cast<std::uint64_t>(d) + i, h.size())];
      picks.push_back(hi);
      polydetail::difference_into(cur, hi, next);
      std::swap(cur, next);
    }
    ++cert.checked_tuples;
    if (auto x = polydetail::first_nonzero(cur)) {
      PolyWitness w;
      for (auto idx : picks) w.hs.push_back(element_of(p.domain, idx));
      w.x = element_of(p.domain, *x);
      cert.witness = std::move(w);
      cert.verdict = false;
      return cert;
    }
  }
  cert.verdict = true;
  return cert;
}

// Does P have rank < (H_1, ..., H_d)?
inline PolyCertificate rank_check(const PolyFunction& p, const std::vector<Subgroup>& hs,
                                  CheckMode mode = CheckMode::difference,
                                  double budget = kPolyBudget) {
  for (const auto& h : hs)
    if (h.group != p.domain) throw structural_error("rank_check: subgroup group mismatch");
  PolyCertificate cert;
  if (hs.empty()) {
    auto x = polydetail::first_nonzero(p);
    cert.verdict = !x.has_value();
    cert.checked_tuples = 1;
    if (x) cert.witness = PolyWitness{{}, element_of(p.domain, *x)};
    return cert;
  }
  double tuples = 1.0;
  for (const auto& h : hs) tuples *= static_cast<double>(h.size());
  if (tuples * static_cast<double>(p.domain.order) > budget)
    throw resource_error("exhaustive rank check exceeds budget; use sampled mode",
                         tuples * static_cast<double>(p.domain.order));
  if (mode == CheckMode::difference) {
    std::vector<std::uint64_t> picks;
    cert.verdict = polydetail::rank_diff_rec(p, hs, 0, picks, cert.checked_tuples, cert);
  } else {
    cert.verdict = polydetail::rank_recursive(p, hs);
    cert.checked_tuples = static_cast<std::uint64_t>(tuples);
    if (!cert.verdict) {
      PolyCertificate diff = rank_check(p, hs, CheckMode::difference, budget);
      cert.witness = diff.witness;
    }
  }
  return cert;
}

// Re-evaluates a certificate's witness: the iterated difference at the
// recorded tuple must be nonzero at the recorded point.
inline bool verify_witness(const PolyFunction& p, const PolyWitness& w) {
  PolyFunction cur = p;
  for (const auto& h : w.hs) cur = additive_difference(cur, h);
  std::uint64_t xi = index_of(p.domain, w.x);
  if (cur.is_modular()) return cur.ivalues[xi] != 0;
  double v = cur.tvalues[xi];
  return std::min(v, 1.0 - v) > 1e-9;
}

}  // namespace gowers
