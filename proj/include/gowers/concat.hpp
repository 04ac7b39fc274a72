#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/group.hpp"
#include "gowers/polyrank.hpp"
#include "gowers/rng.hpp"

namespace gowers {

// Random instance families for the two concatenation statements.
//   polynomial:    P = sum of products A_t(n) B_t(m) on (Z/pZ)^2 with
//                  deg A_t < d1, deg B_t < d2; hypotheses are degree < d1
//                  along rows and < d2 along columns, conclusion is degree
//                  < d1+d2-1 along rows+columns.
//   lowrank_sum2:  P(n,m) = f(n) + g(m) with arbitrary random tables;
//                  rank < (rows, cols), plus the concatenated conclusion
//                  rank < (rows+rows, rows+cols, cols+rows, cols+cols).
//   lowrank_sum3:  P(n,m,k) = f(n,m) + g(n,k) + h(m,k); rank < (H1,H2,H3).
//   product_rank:  P on (Z/pZ)^{d1+d2} = sum_{i,j} f_ij(skip-i coords) *
//                  g_ij(skip-j coords); conclusion is the d1*d2 product grid
//                  rank < (H_{1,i}+H_{2,j}).
enum class ConcatFamily { polynomial, lowrank_sum2, lowrank_sum3, product_rank };

inline const char* to_string(ConcatFamily f) {
  switch (f) {
    case ConcatFamily::polynomial: return "polynomial";
    case ConcatFamily::lowrank_sum2: return "lowrank_sum2";
    case ConcatFamily::lowrank_sum3: return "lowrank_sum3";
    case ConcatFamily::product_rank: return "product_rank";
  }
  return "?";
}

struct ConcatConfig {
  ConcatFamily family = ConcatFamily::polynomial;
  std::int64_t p = 5;  // prime, >= d1+d2 for the polynomial family
  int d1 = 2;
  int d2 = 2;
  int max_terms = 5;
  double budget = kPolyBudget;
};

struct ConcatViolation {
  std::uint64_t trial = 0;
  std::string stage;      // "hypothesis" or "conclusion"
  PolyFunction instance;  // full table, re-verifiable
  std::optional<PolyWitness> witness;
};

struct ConcatReport {
  ConcatConfig config;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  std::optional<ConcatViolation> first_violation;
};

namespace concatdetail {

inline std::int64_t eval_poly(const std::vector<std::int64_t>& coeffs, std::int64_t x,
                              std::int64_t p) {
  std::int64_t acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = (acc * x + coeffs[i]) % p;
  return acc;
}

inline Subgroup axis_subgroup(const GroupSpec& g, std::size_t axis) {
  GroupElement e = zero(g);
  e.residues[axis] = 1;
  return Subgroup::closure(g, SubgroupSpec{{e}});
}

inline Subgroup two_axis_subgroup(const GroupSpec& g, std::size_t a, std::size_t b) {
  GroupElement ea = zero(g), eb = zero(g);
  ea.residues[a] = 1;
  eb.residues[b] = 1;
  return Subgroup::closure(g, SubgroupSpec{{ea, eb}});
}

inline std::vector<std::int64_t> random_table(const RngStream& rng, std::uint64_t len,
                                              std::int64_t p) {
  std::vector<std::int64_t> t(len);
  for (std::uint64_t i = 0; i < len; ++i)
    t[i] = static_cast<std::int64_t>(rng.below(i, static_cast<std::uint64_t>(p)));
  return t;
}

}  // namespace concatdetail

// Runs `trials` random instances of the selected family, verifying both the
// constructed hypotheses and the concatenated conclusion; any violation halts
// with the full instance table.
inline ConcatReport concat_property_test(const ConcatConfig& cfg, std::uint64_t trials,
                                         std::uint64_t seed) {
  if (cfg.p < 2) throw argument_error("concat: p must be >= 2");
  if (cfg.d1 < 1 || cfg.d2 < 1) throw argument_error("concat: degrees must be >= 1");
  ConcatReport report;
  report.config = cfg;
  RngStream rng = make_stream(seed, 0x636f6e63ull /* "conc" */);
  const std::int64_t p = cfg.p;
  const std::uint64_t up = static_cast<std::uint64_t>(p);

  auto record_violation = [&](std::uint64_t trial, const char* stage, PolyFunction inst,
                              std::optional<PolyWitness> w) {
    report.violations++;
    if (!report.first_violation)
      report.first_violation = ConcatViolation{trial, stage, std::move(inst), std::move(w)};
  };

  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream tr = rng.sub(t);
    report.trials++;
    switch (cfg.family) {
      case ConcatFamily::polynomial: {
        GroupSpec g = GroupSpec::product({p, p});
        Subgroup h1 = concatdetail::axis_subgroup(g, 0);
        Subgroup h2 = concatdetail::axis_subgroup(g, 1);
        Subgroup hsum = Subgroup::whole(g);
        int terms = 1 + static_cast<int>(tr.below(0, static_cast<std::uint64_t>(cfg.max_terms)));
        std::vector<std::int64_t> values(g.order, 0);
        bool nonzero = false;
        for (int attempt = 0; attempt < 16 && !nonzero; ++attempt) {
          std::fill(values.begin(), values.end(), 0);
          for (int term = 0; term < terms; ++term) {
            RngStream coeff = tr.sub(16 * (attempt + 1) + term);
            std::vector<std::int64_t> a(static_cast<std::size_t>(cfg.d1));
            std::vector<std::int64_t> b(static_cast<std::size_t>(cfg.d2));
            for (std::size_t i = 0; i < a.size(); ++i)
              a[i] = static_cast<std::int64_t>(coeff.below(i, up));
            for (std::size_t i = 0; i < b.size(); ++i)
              b[i] = static_cast<std::int64_t>(coeff.below(64 + i, up));
            for (std::int64_t n = 0; n < p; ++n)
              for (std::int64_t m = 0; m < p; ++m) {
                std::int64_t v =
                    concatdetail::eval_poly(a, n, p) * concatdetail::eval_poly(b, m, p) % p;
                std::uint64_t idx = static_cast<std::uint64_t>(n * p + m);
                values[idx] = (values[idx] + v) % p;
              }
          }
          for (auto v : values) nonzero = nonzero || v != 0;
          if (cfg.d1 == 1 && cfg.d2 == 1) break;  // constants may legitimately be zero
        }
        PolyFunction inst = PolyFunction::modular(g, p, values);
        PolyCertificate hy1 = degree_check(inst, h1, cfg.d1, CheckMode::difference, cfg.budget);
        PolyCertificate hy2 = degree_check(inst, h2, cfg.d2, CheckMode::difference, cfg.budget);
        if (!hy1.verdict || !hy2.verdict) {
          record_violation(t, "hypothesis", inst, hy1.verdict ? hy2.witness : hy1.witness);
          return report;
        }
        PolyCertificate conc =
            degree_check(inst, hsum, cfg.d1 + cfg.d2 - 1, CheckMode::difference, cfg.budget);
        if (!conc.verdict) {
          record_violation(t, "conclusion", inst, conc.witness);
          return report;
        }
        break;
      }
      case ConcatFamily::lowrank_sum2: {
        GroupSpec g = GroupSpec::product({p, p});
        Subgroup h1 = concatdetail::axis_subgroup(g, 0);
        Subgroup h2 = concatdetail::axis_subgroup(g, 1);
        auto f = concatdetail::random_table(tr.sub(1), up, p);
        auto gg = concatdetail::random_table(tr.sub(2), up, p);
        std::vector<std::int64_t> values(g.order);
        for (std::int64_t n = 0; n < p; ++n)
          for (std::int64_t m = 0; m < p; ++m)
            values[static_cast<std::uint64_t>(n * p + m)] = (f[n] + gg[m]) % p;
        PolyFunction inst = PolyFunction::modular(g, p, values);
        PolyCertificate hy = rank_check(inst, {h1, h2}, CheckMode::difference, cfg.budget);
        if (!hy.verdict) {
          record_violation(t, "hypothesis", inst, hy.witness);
          return report;
        }
        // concatenated conclusion with both hypothesis tuples equal to
        // (rows, cols): the 2x2 grid (rows, G, G, cols)
        Subgroup whole = Subgroup::whole(g);
        PolyCertificate conc =
            rank_check(inst, {h1, whole, whole, h2}, CheckMode::difference, cfg.budget);
        if (!conc.verdict) {
          record_violation(t, "conclusion", inst, conc.witness);
          return report;
        }
        break;
      }
      case ConcatFamily::lowrank_sum3: {
        GroupSpec g = GroupSpec::product({p, p, p});
        Subgroup h1 = concatdetail::axis_subgroup(g, 0);
        Subgroup h2 = concatdetail::axis_subgroup(g, 1);
        Subgroup h3 = concatdetail::axis_subgroup(g, 2);
        std::uint64_t pp = up * up;
        auto f = concatdetail::random_table(tr.sub(1), pp, p);
        auto gg = concatdetail::random_table(tr.sub(2), pp, p);
        auto hh = concatdetail::random_table(tr.sub(3), pp, p);
        std::vector<std::int64_t> values(g.order);
        for (std::int64_t n = 0; n < p; ++n)
          for (std::int64_t m = 0; m < p; ++m)
            for (std::int64_t k = 0; k < p; ++k)
              values[static_cast<std::uint64_t>((n * p + m) * p + k)] =
                  (f[n * p + m] + gg[n * p + k] + hh[m * p + k]) % p;
        PolyFunction inst = PolyFunction::modular(g, p, values);
        PolyCertificate hy = rank_check(inst, {h1, h2, h3}, CheckMode::difference, cfg.budget);
        if (!hy.verdict) {
          record_violation(t, "hypothesis", inst, hy.witness);
          return report;
        }
        break;
      }
      case ConcatFamily::product_rank: {
        int d1 = cfg.d1, d2 = cfg.d2;
        std::vector<std::int64_t> mods(static_cast<std::size_t>(d1 + d2), p);
        GroupSpec g = GroupSpec::product(mods);
        std::uint64_t block1 = 1, block2 = 1;
        for (int i = 1; i < d1; ++i) block1 *= up;
        for (int j = 1; j < d2; ++j) block2 *= up;
        std::vector<std::int64_t> values(g.order, 0);
        for (int i = 0; i < d1; ++i)
          for (int j = 0; j < d2; ++j) {
            RngStream cell = tr.sub(static_cast<std::uint64_t>(i * d2 + j));
            auto fij = concatdetail::random_table(cell.sub(1), block1, p);
            auto gij = concatdetail::random_table(cell.sub(2), block2, p);
            for (std::uint64_t x = 0; x < g.order; ++x) {
              GroupElement e = element_of(g, x);
              std::uint64_t fi = 0, gi = 0;
              for (int a = 0; a < d1; ++a)
                if (a != i) fi = fi * up + static_cast<std::uint64_t>(e.residues[a]);
              for (int b = 0; b < d2; ++b)
                if (b != j) gi = gi * up + static_cast<std::uint64_t>(e.residues[d1 + b]);
              values[x] = (values[x] + fij[fi] * gij[gi]) % p;
            }
          }
        PolyFunction inst = PolyFunction::modular(g, p, values);
        // hypotheses: the two block tuples of axis subgroups
        std::vector<Subgroup> hyp1, hyp2;
        for (int i = 0; i < d1; ++i) hyp1.push_back(concatdetail::axis_subgroup(g, i));
        for (int j = 0; j < d2; ++j)
          hyp2.push_back(concatdetail::axis_subgroup(g, static_cast<std::size_t>(d1 + j)));
        PolyCertificate hy1 = rank_check(inst, hyp1, CheckMode::difference, cfg.budget);
        PolyCertificate hy2 = rank_check(inst, hyp2, CheckMode::difference, cfg.budget);
        if (!hy1.verdict || !hy2.verdict) {
          record_violation(t, "hypothesis", inst, hy1.verdict ? hy2.witness : hy1.witness);
          return report;
        }
        std::vector<Subgroup> sums;
        for (int i = 0; i < d1; ++i)
          for (int j = 0; j < d2; ++j)
            sums.push_back(
                concatdetail::two_axis_subgroup(g, static_cast<std::size_t>(i),
                                                static_cast<std::size_t>(d1 + j)));
        PolyCertificate conc = rank_check(inst, sums, CheckMode::difference, cfg.budget);
        if (!conc.verdict) {
          record_violation(t, "conclusion", inst, conc.witness);
          return report;
        }
        break;
      }
    }
  }
  return report;
}

}  // namespace gowers
