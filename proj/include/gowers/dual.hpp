#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/function_table.hpp"
#include "gowers/norms.hpp"
#include "gowers/rng.hpp"
#include "gowers/shiftset.hpp"

namespace gowers {

// Dual function D^d_{Q_1..Q_d}((f_w)_{w != 0}): the 2^d - 1 fold shifted
// product averaged over the difference multisets Q_i - Q_i.  Pairing f with
// D^d(f,...,f) recovers ||f||^{2^d} over the same Q_i exactly, because the
// x-integral turns (h, h') pairs into differences.  D^0() = 1.
inline FunctionTable dual_function(const std::vector<FunctionTable>& fs,
                                   const std::vector<ShiftSet>& qs,
                                   double budget = kDefaultNormBudget) {
  const std::size_t d = qs.size();
  const std::size_t corners = std::size_t(1) << d;
  if (d == 0) {
    throw argument_error("dual function: d = 0 has no inputs; use the constant 1");
  }
  if (fs.size() != corners - 1)
    throw argument_error("dual function: need exactly 2^d - 1 functions");
  const GroupSpec& g = fs[0].group;
  for (const auto& f : fs)
    if (f.group != g) throw structural_error("dual function: group mismatch");
  for (const auto& q : qs)
    if (q.group() != g) throw structural_error("dual function: shift set on wrong group");

  double est = normdetail::estimate_exact_cost(g, qs) * static_cast<double>(corners);
  if (est > budget) throw resource_error("dual function cost estimate exceeds budget", est);

  std::vector<const Multiset*> diffs;
  std::vector<double> inv_sq;
  for (const auto& q : qs) {
    diffs.push_back(&q.difference_histogram());
    double t = static_cast<double>(q.total());
    inv_sq.push_back(1.0 / (t * t));
  }

  std::vector<KahanSumC> acc(g.order);
  std::vector<cd> term(g.order);
  std::vector<cd> shifted(g.order);
  std::vector<std::size_t> pos(d, 0);
  for (;;) {
    double w = 1.0;
    std::vector<std::uint64_t> k(d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto& [ki, mi] = diffs[i]->entries[pos[i]];
      k[i] = ki;
      w *= static_cast<double>(mi) * inv_sq[i];
    }
    std::fill(term.begin(), term.end(), cd{1.0, 0.0});
    for (std::size_t c = 1; c < corners; ++c) {
      std::uint64_t o = 0;
      for (std::size_t i = 0; i < d; ++i)
        if ((c >> i) & 1) o = index_add(g, o, k[i]);
      // C^{|w|-1}: conjugate on even |w|
      bool conj_it = (std::popcount(c) & 1) == 0;
      const auto& src = fs[c - 1].values;
      normdetail::for_each_shifted(g, o, [&](std::uint64_t x, std::uint64_t y) {
        shifted[x] = conj_it ? std::conj(src[y]) : src[y];
      });
      for (std::uint64_t x = 0; x < g.order; ++x) term[x] *= shifted[x];
    }
    for (std::uint64_t x = 0; x < g.order; ++x) acc[x].add(term[x] * w);

    std::size_t i = 0;
    for (; i < d; ++i) {
      if (++pos[i] < diffs[i]->entries.size()) break;
      pos[i] = 0;
    }
    if (i == d) break;
  }
  FunctionTable out = FunctionTable::zero(g);
  for (std::uint64_t x = 0; x < g.order; ++x) out.values[x] = acc[x].value();
  return out;
}

inline FunctionTable dual_function_uniform(const FunctionTable& f, const ShiftSet& q, int d,
                                           double budget = kDefaultNormBudget) {
  if (d < 1) throw argument_error("dual function: d must be >= 1");
  std::vector<FunctionTable> fs((std::size_t(1) << d) - 1, f);
  return dual_function(fs, std::vector<ShiftSet>(static_cast<std::size_t>(d), q), budget);
}

// Witness for a lower bound on ||f||_{U^d_Q(X)*,eps}: a g with
// ||g||_inf <= 1 and ||g||_{U^d_{eps Q}} <= eps, both re-verified, and the
// attained |<f, g>|.
struct DualWitness {
  FunctionTable g;
  double inner = 0.0;
  double sup_norm = 0.0;
  double u_norm = 0.0;
  double eps = 0.0;
  bool feasible = false;
  std::string strategy;
};

namespace dualdetail {

struct Feasibility {
  double sup, u;
  bool ok(double eps) {
    return sup <= 1.0 + kRelTol && u <= eps + kRelTol;
  }
};

inline Feasibility check_feasible(const FunctionTable& g, const std::vector<ShiftSet>& eps_qs,
                                  double budget) {
  Feasibility fe;
  fe.sup = sup_norm(g);
  fe.u = box_norm_exact(g, eps_qs, budget).value;
  return fe;
}

// Largest t in (0, 1] making t*g feasible; the norms are homogeneous.
inline double feasible_scale(const Feasibility& fe, double eps) {
  double t = 1.0;
  if (fe.sup > 1.0) t = std::min(t, 1.0 / fe.sup);
  if (fe.u > 0.0) t = std::min(t, eps / fe.u);
  // nudge below the boundary so the re-verification tolerance is comfortable
  return t * (1.0 - 1e-12);
}

}  // namespace dualdetail

// Certified lower bound for the eps-perturbed dual norm (sup over g in the
// L^inf unit ball with ||g||_{U^d_{eps Q}} <= eps of |<f,g>|).  Candidates:
//   (a) random +-1 tables rescaled into feasibility,
//   (b) characters rescaled into feasibility,
//   (c) projected ascent on Re<f,g> with sup-norm clipping and multiplicative
//       down-scaling whenever the U-norm constraint is violated.
// Returns the best candidate that re-verifies both constraints; g = 0 with
// inner 0 when nothing feasible is found.
inline DualWitness dual_norm_lower_bound(const FunctionTable& f, const CosetProgression& q,
                                         int d, double eps, std::uint64_t seed,
                                         double budget = kDefaultNormBudget,
                                         int random_candidates = 8, int ascent_steps = 60) {
  if (!(eps > 0.0)) throw argument_error("dual norm: eps must be > 0");
  if (d < 1) throw argument_error("dual norm: d must be >= 1");
  const GroupSpec& g = f.group;
  ShiftSet eps_q = ShiftSet::from(dilate(q, eps));
  std::vector<ShiftSet> eps_qs(static_cast<std::size_t>(d), eps_q);

  DualWitness best;
  best.g = FunctionTable::zero(g);
  best.eps = eps;
  best.feasible = true;
  best.strategy = "zero";

  auto consider = [&](FunctionTable cand, const char* name) {
    auto fe = dualdetail::check_feasible(cand, eps_qs, budget);
    if (!fe.ok(eps)) {
      double t = dualdetail::feasible_scale(fe, eps);
      if (!(t > 0.0)) return;
      cand = scale_table(cand, t);
      fe = dualdetail::check_feasible(cand, eps_qs, budget);
      if (!fe.ok(eps)) return;
    }
    double ip = std::abs(inner(f, cand));
    if (ip > best.inner) {
      best.g = std::move(cand);
      best.inner = ip;
      best.sup_norm = fe.sup;
      best.u_norm = fe.u;
      best.strategy = name;
      best.feasible = true;
    }
  };

  RngStream rng = make_stream(seed, 0x6475616cull /* "dual" */);
  for (int c = 0; c < random_candidates; ++c)
    consider(FunctionTable::random_pm1(g, rng.sub(c)), "random_pm1");

  // characters: the full set on small groups, a sample otherwise
  std::uint64_t nchar = std::min<std::uint64_t>(g.order, 64);
  RngStream chi_rng = rng.sub(0x636869ull);
  for (std::uint64_t c = 0; c < nchar; ++c) {
    std::uint64_t xi = g.order <= 64 ? c : chi_rng.below(c, g.order);
    consider(FunctionTable::character(g, element_of(g, xi)), "character");
  }

  // projected ascent from the phase of f
  FunctionTable cur = FunctionTable::zero(g);
  for (std::uint64_t x = 0; x < g.order; ++x) {
    cd v = f.values[x];
    cur.values[x] = std::abs(v) > 0 ? v / std::abs(v) : cd{1.0, 0.0};
  }
  double step = 0.5;
  for (int it = 0; it < ascent_steps; ++it) {
    consider(cur, "projected_ascent");
    // gradient of Re<f,g> in g is f / order; step towards f then clip
    for (std::uint64_t x = 0; x < g.order; ++x) {
      cd v = cur.values[x] + step * f.values[x];
      double a = std::abs(v);
      cur.values[x] = a > 1.0 ? v / a : v;
    }
    auto fe = dualdetail::check_feasible(cur, eps_qs, budget);
    if (fe.u > eps) {
      double t = (eps / fe.u) * (1.0 - 1e-9);
      cur = scale_table(cur, t);
    }
    step *= 0.9;
  }
  consider(cur, "projected_ascent");
  return best;
}

// Exhaustive discretized oracle on tiny groups: every coordinate of g ranges
// over {0} united with the phase_levels-th roots of unity.
inline DualWitness dual_norm_oracle_tiny(const FunctionTable& f, const CosetProgression& q,
                                         int d, double eps, int phase_levels,
                                         double enumeration_cap = 1e8,
                                         double budget = kDefaultNormBudget) {
  if (!(eps > 0.0)) throw argument_error("dual norm oracle: eps must be > 0");
  if (phase_levels < 1) throw argument_error("dual norm oracle: phase_levels must be >= 1");
  const GroupSpec& g = f.group;
  double count = std::pow(static_cast<double>(phase_levels) + 1.0, static_cast<double>(g.order));
  if (count > enumeration_cap)
    throw resource_error("dual norm oracle enumeration too large", count);

  ShiftSet eps_q = ShiftSet::from(dilate(q, eps));
  std::vector<ShiftSet> eps_qs(static_cast<std::size_t>(d), eps_q);
  constexpr double tau = 6.283185307179586476925286766559;
  std::vector<cd> levels(static_cast<std::size_t>(phase_levels) + 1);
  levels[0] = cd{0.0, 0.0};
  for (int l = 0; l < phase_levels; ++l)
    levels[static_cast<std::size_t>(l) + 1] = std::polar(1.0, tau * l / phase_levels);

  DualWitness best;
  best.g = FunctionTable::zero(g);
  best.eps = eps;
  best.feasible = true;
  best.strategy = "oracle";

  const std::uint64_t radix = levels.size();
  std::uint64_t n_cand = 1;
  for (std::uint64_t i = 0; i < g.order; ++i) n_cand *= radix;
  FunctionTable cand = FunctionTable::zero(g);
  for (std::uint64_t code = 0; code < n_cand; ++code) {
    std::uint64_t c = code;
    for (std::uint64_t x = 0; x < g.order; ++x) {
      cand.values[x] = levels[c % radix];
      c /= radix;
    }
    double ip = std::abs(inner(f, cand));
    if (ip <= best.inner) continue;
    auto fe = dualdetail::check_feasible(cand, eps_qs, budget);
    if (!fe.ok(eps)) continue;
    best.g = cand;
    best.inner = ip;
    best.sup_norm = fe.sup;
    best.u_norm = fe.u;
  }
  return best;
}

}  // namespace gowers
