#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/function_table.hpp"
#include "gowers/norms.hpp"
#include "gowers/progression.hpp"
#include "gowers/rng.hpp"

namespace gowers {

// One norm evaluation inside a scan; failed evaluations annotate the cell
// instead of aborting the report.
struct NormCell {
  std::optional<NormResult> result;
  std::string error;
};

// For one eps: all ordered pairs (i, j), including the diagonal, of
// U^{2d-1} norms over eps Q_i + eps Q_j, and the per-index U^d norms over
// Q_i; lhs / rhs are the means of the available values.
struct BesselReport {
  double eps = 0.0;
  int d = 0;
  std::vector<std::vector<NormCell>> pair_norms;  // [i][j]
  std::vector<NormCell> single_norms;             // [i]
  double lhs = 0.0;
  double rhs = 0.0;
  std::uint64_t pair_errors = 0;
  std::uint64_t single_errors = 0;
  // noted when the hypothesis lhs <= eps does not hold, making the
  // conclusion side vacuous for this eps
  bool hypothesis_satisfied = false;
};

namespace besseldetail {

inline NormCell eval_norm(const FunctionTable& f, const std::vector<ShiftSet>& qs, double budget,
                          std::uint64_t mc_samples, std::uint64_t seed) {
  NormCell cell;
  try {
    double est = normdetail::estimate_exact_cost(f.group, qs);
    if (est <= budget) {
      cell.result = box_norm_exact(f, qs, budget);
    } else {
      cell.result = box_norm_mc(f, qs, mc_samples, seed);
    }
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

}  // namespace besseldetail

// Scans the two sides of the qualitative Bessel inequality over eps_list.
// rhs norms do not depend on eps and are computed once, then echoed into
// every report so each report is self-contained.
inline std::vector<BesselReport> bessel_scan(const FunctionTable& f,
                                             const std::vector<CosetProgression>& progressions,
                                             int d, const std::vector<double>& eps_list,
                                             double budget = kDefaultNormBudget,
                                             std::uint64_t mc_samples = 20000,
                                             std::uint64_t seed = 0) {
  if (d < 1) throw argument_error("bessel scan: d must be >= 1");
  if (progressions.empty()) throw argument_error("bessel scan: need at least one progression");
  for (const auto& q : progressions)
    if (q.group != f.group) throw structural_error("bessel scan: progression group mismatch");
  const std::size_t ni = progressions.size();
  const int high = 2 * d - 1;

  std::vector<NormCell> singles(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    ShiftSet q = ShiftSet::from(progressions[i]);
    singles[i] = besseldetail::eval_norm(f, std::vector<ShiftSet>(d, q), budget, mc_samples,
                                         make_stream(seed, 1000 + i).key);
  }

  // progression sums Q_i + Q_j are eps-independent; build once per pair
  std::vector<std::vector<CosetProgression>> sums(ni);
  for (std::size_t i = 0; i < ni; ++i)
    for (std::size_t j = 0; j < ni; ++j)
      sums[i].push_back(progression_sum(progressions[i], progressions[j]));

  std::vector<BesselReport> reports;
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    double eps = eps_list[ei];
    BesselReport rep;
    rep.eps = eps;
    rep.d = d;
    rep.single_norms = singles;
    rep.pair_norms.assign(ni, std::vector<NormCell>(ni));
    KahanSum lhs_acc;
    std::uint64_t lhs_count = 0;
    for (std::size_t i = 0; i < ni; ++i)
      for (std::size_t j = 0; j < ni; ++j) {
        ShiftSet q = ShiftSet::from(dilate(sums[i][j], eps));
        NormCell cell = besseldetail::eval_norm(
            f, std::vector<ShiftSet>(high, q), budget, mc_samples,
            make_stream(seed, (ei * ni + i) * ni + j).key);
        if (cell.result) {
          lhs_acc.add(cell.result->value);
          ++lhs_count;
        } else {
          ++rep.pair_errors;
        }
        rep.pair_norms[i][j] = std::move(cell);
      }
    KahanSum rhs_acc;
    std::uint64_t rhs_count = 0;
    for (std::size_t i = 0; i < ni; ++i) {
      if (singles[i].result) {
        rhs_acc.add(singles[i].result->value);
        ++rhs_count;
      } else {
        ++rep.single_errors;
      }
    }
    rep.lhs = lhs_count ? lhs_acc.value() / static_cast<double>(lhs_count) : 0.0;
    rep.rhs = rhs_count ? rhs_acc.value() / static_cast<double>(rhs_count) : 0.0;
    rep.hypothesis_satisfied = lhs_count > 0 && rep.lhs <= eps;
    reports.push_back(std::move(rep));
  }
  return reports;
}

// Box-norm variant (the besu-box shape): per index i a family (Q_{i,1}, ...,
// Q_{i,d}); lhs uses the d^2-dimensional grid (eps Q_{i,k} + eps Q_{j,l}).
inline std::vector<BesselReport> bessel_scan_box(
    const FunctionTable& f, const std::vector<std::vector<CosetProgression>>& families, int d,
    const std::vector<double>& eps_list, double budget = kDefaultNormBudget,
    std::uint64_t mc_samples = 20000, std::uint64_t seed = 0) {
  if (d < 1) throw argument_error("bessel box scan: d must be >= 1");
  const std::size_t ni = families.size();
  if (ni == 0) throw argument_error("bessel box scan: need at least one family");
  for (const auto& fam : families) {
    if (static_cast<int>(fam.size()) != d)
      throw argument_error("bessel box scan: every family needs exactly d progressions");
    for (const auto& q : fam)
      if (q.group != f.group) throw structural_error("bessel box scan: group mismatch");
  }

  std::vector<NormCell> singles(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    std::vector<ShiftSet> qs;
    for (const auto& q : families[i]) qs.push_back(ShiftSet::from(q));
    singles[i] = besseldetail::eval_norm(f, qs, budget, mc_samples,
                                         make_stream(seed, 2000 + i).key);
  }

  std::vector<BesselReport> reports;
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    double eps = eps_list[ei];
    BesselReport rep;
    rep.eps = eps;
    rep.d = d;
    rep.single_norms = singles;
    rep.pair_norms.assign(ni, std::vector<NormCell>(ni));
    KahanSum lhs_acc;
    std::uint64_t lhs_count = 0;
    for (std::size_t i = 0; i < ni; ++i)
      for (std::size_t j = 0; j < ni; ++j) {
        std::vector<ShiftSet> grid;
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            grid.push_back(ShiftSet::from(
                dilate(progression_sum(families[i][k], families[j][l]), eps)));
        NormCell cell = besseldetail::eval_norm(
            f, grid, budget, mc_samples, make_stream(seed, 3000 + (ei * ni + i) * ni + j).key);
        if (cell.result) {
          lhs_acc.add(cell.result->value);
          ++lhs_count;
        } else {
          ++rep.pair_errors;
        }
        rep.pair_norms[i][j] = std::move(cell);
      }
    KahanSum rhs_acc;
    std::uint64_t rhs_count = 0;
    for (std::size_t i = 0; i < ni; ++i)
      if (singles[i].result) {
        rhs_acc.add(singles[i].result->value);
        ++rhs_count;
      } else {
        ++rep.single_errors;
      }
    rep.lhs = lhs_count ? lhs_acc.value() / static_cast<double>(lhs_count) : 0.0;
    rep.rhs = rhs_count ? rhs_acc.value() / static_cast<double>(rhs_count) : 0.0;
    rep.hypothesis_satisfied = lhs_count > 0 && rep.lhs <= eps;
    reports.push_back(std::move(rep));
  }
  return reports;
}

// The counterexample to min-norm control: f = f1 + f2 where f1 is constant
// along Q1 but carries a random +-1 profile across Q1-cosets (hence random
// in the Q2 direction when the subgroups are transverse), and f2 vice versa.
struct CounterexamplePair {
  FunctionTable f;
  FunctionTable f1;
  FunctionTable f2;
  NormResult f1_along_q1;   // U^{d1}_{Q1}, expected 1
  NormResult f1_along_q2;   // U^{d2}_{Q2}, expected small
  NormResult f2_along_q2;   // U^{d2}_{Q2}, expected 1
  NormResult f2_along_q1;   // U^{d1}_{Q1}, expected small
  NormResult combined;      // U^{d1+d2-1}_{eps Q1 + eps Q2} of f
};

namespace besseldetail {

inline std::uint64_t subgroup_tag(const Subgroup& h) {
  std::uint64_t acc = 0xcbf29ce484222325ull;
  for (std::uint64_t e : h.elements) {
    acc ^= e;
    acc *= 0x100000001b3ull;
  }
  return acc;
}

// Random +-1 profile constant on the cosets of h; keyed by the subgroup
// content so that swapping (Q1, Q2) swaps the two pieces exactly.
inline FunctionTable coset_profile(const GroupSpec& g, const Subgroup& h, std::uint64_t seed) {
  RngStream rng = make_stream(seed, subgroup_tag(h));
  FunctionTable out = FunctionTable::zero(g);
  std::vector<char> done(g.order, 0);
  std::uint64_t coset_no = 0;
  for (std::uint64_t x = 0; x < g.order; ++x) {
    if (done[x]) continue;
    double v = rng.sign(coset_no++);
    for (std::uint64_t a : h.elements) {
      std::uint64_t y = index_add(g, x, a);
      out.values[y] = v;
      done[y] = 1;
    }
  }
  return out;
}

}  // namespace besseldetail

inline CounterexamplePair counterexample_pair(const GroupSpec& g, const Subgroup& q1,
                                              const Subgroup& q2, int d1, int d2, double eps,
                                              std::uint64_t seed,
                                              double budget = kDefaultNormBudget,
                                              std::uint64_t mc_samples = 20000) {
  if (q1.group != g || q2.group != g)
    throw structural_error("counterexample: subgroup group mismatch");
  if (g.order / q1.size() < 2 || g.order / q2.size() < 2)
    throw argument_error("counterexample: subgroup index too small to randomize");
  if (d1 < 1 || d2 < 1) throw argument_error("counterexample: degrees must be >= 1");

  CounterexamplePair out;
  out.f1 = besseldetail::coset_profile(g, q1, seed);
  out.f2 = besseldetail::coset_profile(g, q2, seed);
  out.f = linear_combination(1.0, out.f1, 1.0, out.f2);

  CosetProgression p1 = CosetProgression::of_subgroup(q1);
  CosetProgression p2 = CosetProgression::of_subgroup(q2);
  ShiftSet s1 = ShiftSet::from(p1);
  ShiftSet s2 = ShiftSet::from(p2);
  auto norm_of = [&](const FunctionTable& fn, const ShiftSet& s, int d, std::uint64_t tag) {
    NormCell cell = besseldetail::eval_norm(fn, std::vector<ShiftSet>(d, s), budget, mc_samples,
                                            make_stream(seed, tag).key);
    if (!cell.result) throw resource_error("counterexample: norm evaluation failed: " + cell.error);
    return *cell.result;
  };
  out.f1_along_q1 = norm_of(out.f1, s1, d1, 1);
  out.f1_along_q2 = norm_of(out.f1, s2, d2, 2);
  out.f2_along_q2 = norm_of(out.f2, s2, d2, 3);
  out.f2_along_q1 = norm_of(out.f2, s1, d1, 4);
  ShiftSet joint = ShiftSet::from(dilate(progression_sum(p1, p2), eps));
  NormCell cell = besseldetail::eval_norm(out.f, std::vector<ShiftSet>(d1 + d2 - 1, joint), budget,
                                          mc_samples, make_stream(seed, 5).key);
  if (!cell.result) throw resource_error("counterexample: joint norm failed: " + cell.error);
  out.combined = *cell.result;
  return out;
}

}  // namespace gowers
