#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/function_table.hpp"
#include "gowers/parallel.hpp"
#include "gowers/rng.hpp"
#include "gowers/shiftset.hpp"

namespace gowers {

enum class NormMethod { exact, monte_carlo };

inline const char* to_string(NormMethod m) {
  return m == NormMethod::exact ? "exact" : "monte_carlo";
}

// value = max(base_power_mean, 0)^(1/2^d).  The raw 2^d-fold mean is kept:
// the exact quantity is a nonnegative power but the MC estimator is not, and
// std_error lives at the base-power level.
struct NormResult {
  double value = 0.0;
  NormMethod method = NormMethod::exact;
  std::uint64_t samples = 0;
  double std_error = 0.0;
  double base_power_mean = 0.0;
  int degree = 0;
};

inline constexpr double kDefaultNormBudget = 1e9;

namespace normdetail {

// Iterates x over the whole group in dense order together with y = x - k,
// tracking the mixed-radix odometer so no per-step division happens.
template <class Body>
void for_each_shifted(const GroupSpec& g, std::uint64_t k, Body&& body) {
  const std::uint64_t order = g.order;
  if (g.arity() == 1) {
    const std::uint64_t n = order;
    std::uint64_t y = (n - (k % n)) % n;
    for (std::uint64_t x = 0; x < n; ++x) {
      body(x, y);
      if (++y == n) y = 0;
    }
    return;
  }
  const std::size_t a = g.arity();
  std::vector<std::int64_t> stride(a), rx(a, 0), ry(a), kr(a);
  {
    std::int64_t s = 1;
    for (std::size_t i = a; i-- > 0;) {
      stride[i] = s;
      s *= g.moduli[i];
    }
    std::uint64_t kk = k;
    for (std::size_t i = a; i-- > 0;) {
      kr[i] = static_cast<std::int64_t>(kk % static_cast<std::uint64_t>(g.moduli[i]));
      kk /= static_cast<std::uint64_t>(g.moduli[i]);
    }
  }
  std::int64_t y = 0;
  for (std::size_t i = 0; i < a; ++i) {
    ry[i] = (0 - kr[i] + g.moduli[i]) % g.moduli[i];
    y += ry[i] * stride[i];
  }
  for (std::uint64_t x = 0; x < order; ++x) {
    body(x, static_cast<std::uint64_t>(y));
    // odometer increment with carries, updating y per changed axis
    for (std::size_t i = a; i-- > 0;) {
      if (++rx[i] < g.moduli[i]) {
        std::int64_t old = ry[i];
        if (++ry[i] == g.moduli[i]) ry[i] = 0;
        y += (ry[i] - old) * stride[i];
        break;
      }
      rx[i] = 0;
      std::int64_t old = ry[i];
      ry[i] = (0 - kr[i] + g.moduli[i]) % g.moduli[i];
      y += (ry[i] - old) * stride[i];
    }
  }
}

// out[x] = cur[x] * conj(cur[x - k])
inline void delta_into(const GroupSpec& g, const std::vector<cd>& cur, std::uint64_t k,
                       std::vector<cd>& out) {
  out.resize(cur.size());
  for_each_shifted(g, k, [&](std::uint64_t x, std::uint64_t y) {
    out[x] = cur[x] * std::conj(cur[y]);
  });
}

inline cd table_mean(const std::vector<cd>& v) {
  KahanSumC acc;
  for (const cd& z : v) acc.add(z);
  return acc.value() / static_cast<double>(v.size());
}

struct ExactPlan {
  GroupSpec group;
  std::vector<const Multiset*> diffs;    // per level, bottom first
  std::vector<double> inv_sq_total;      // 1 / |Q_i|^2
};

// E_{h,h' in Q_level} value_{level-1}(Delta_{h,h'} f), folded over the
// collapsed difference multiset: the x-integral absorbs the common shift, so
// only h'-h matters and its multiset is exactly Q-Q.
inline cd box_power_rec(const ExactPlan& plan, std::size_t level, const std::vector<cd>& cur,
                        std::vector<std::vector<cd>>& scratch) {
  if (level == 0) return table_mean(cur);
  const Multiset& d = *plan.diffs[level - 1];
  const double w_norm = plan.inv_sq_total[level - 1];
  std::vector<cd>& tmp = scratch[level - 1];
  KahanSumC acc;
  for (const auto& [k, m] : d.entries) {
    delta_into(plan.group, cur, k, tmp);
    acc.add(box_power_rec(plan, level - 1, tmp, scratch) *
            (static_cast<double>(m) * w_norm));
  }
  return acc.value();
}

inline double estimate_exact_cost(const GroupSpec& g, const std::vector<ShiftSet>& qs) {
  double est = static_cast<double>(g.order);
  for (const auto& q : qs) est *= q.diff_support_bound();
  return est;
}

}  // namespace normdetail

// Exact Gowers box norm over one shift multiset per axis.
inline NormResult box_norm_exact(const FunctionTable& f, const std::vector<ShiftSet>& qs,
                                 double budget = kDefaultNormBudget) {
  if (qs.empty()) throw argument_error("box norm: d must be >= 1");
  for (const auto& q : qs)
    if (q.group() != f.group) throw structural_error("box norm: shift set on wrong group");
  const int d = static_cast<int>(qs.size());
  double est = normdetail::estimate_exact_cost(f.group, qs);
  if (est > budget) {
    std::ostringstream os;
    os << "exact box norm cost estimate " << est << " exceeds budget " << budget
       << "; use the Monte-Carlo estimator";
    throw resource_error(os.str(), est);
  }

  normdetail::ExactPlan plan;
  plan.group = f.group;
  for (const auto& q : qs) {
    plan.diffs.push_back(&q.difference_histogram());
    double t = static_cast<double>(q.total());
    plan.inv_sq_total.push_back(1.0 / (t * t));
  }
  // refresh the estimate with true support sizes
  est = static_cast<double>(f.group.order);
  for (const auto* dm : plan.diffs) est *= static_cast<double>(dm->entries.size());
  if (est > budget) {
    std::ostringstream os;
    os << "exact box norm cost " << est << " exceeds budget " << budget
       << "; use the Monte-Carlo estimator";
    throw resource_error(os.str(), est);
  }

  const Multiset& top = *plan.diffs[d - 1];
  const double w_norm = plan.inv_sq_total[d - 1];
  const std::uint64_t n_top = top.entries.size();
  // chunk size depends on the problem only, keeping sums thread-count-proof
  std::uint64_t chunk = std::max<std::uint64_t>(1, n_top / 64);
  auto partials = chunked_map<cd>(n_top, chunk, [&](std::uint64_t b, std::uint64_t e) {
    std::vector<std::vector<cd>> scratch(d);
    KahanSumC acc;
    for (std::uint64_t i = b; i < e; ++i) {
      const auto& [k, m] = top.entries[i];
      normdetail::delta_into(plan.group, f.values, k, scratch[d - 1]);
      if (d == 1) {
        acc.add(normdetail::table_mean(scratch[0]) * (static_cast<double>(m) * w_norm));
      } else {
        acc.add(normdetail::box_power_rec(plan, d - 1, scratch[d - 1], scratch) *
                (static_cast<double>(m) * w_norm));
      }
    }
    return acc.value();
  });
  KahanSumC total;
  for (cd p : partials) total.add(p);

  NormResult r;
  r.method = NormMethod::exact;
  r.degree = d;
  r.base_power_mean = total.value().real();
  r.value = r.base_power_mean <= 0.0 ? 0.0 : std::pow(r.base_power_mean, 1.0 / std::ldexp(1.0, d));
  return r;
}

inline NormResult uniformity_norm(const FunctionTable& f, const ShiftSet& q, int d,
                                  double budget = kDefaultNormBudget) {
  if (d < 1) throw argument_error("uniformity norm: d must be >= 1");
  return box_norm_exact(f, std::vector<ShiftSet>(static_cast<std::size_t>(d), q), budget);
}

// Unbiased Monte-Carlo estimator of the 2^d-fold base mean: i.i.d. draws of
// (h_1, h'_1, ..., h_d, h'_d) from the index spaces, each sample evaluating
// Re of the x-integral.  Deterministic given the seed regardless of threads.
inline NormResult box_norm_mc(const FunctionTable& f, const std::vector<ShiftSet>& qs,
                              std::uint64_t samples, std::uint64_t seed) {
  if (qs.empty()) throw argument_error("box norm: d must be >= 1");
  if (samples < 1) throw argument_error("box norm MC: samples must be >= 1");
  for (const auto& q : qs) {
    if (q.group() != f.group) throw structural_error("box norm: shift set on wrong group");
    if (q.total() == 0) throw argument_error("box norm MC: empty index space");
  }
  const std::size_t d = qs.size();
  const std::size_t corners = std::size_t(1) << d;
  const GroupSpec& g = f.group;
  RngStream stream = make_stream(seed, 0x626f786d63ull /* "boxmc" */);

  const std::uint64_t chunk = 4096;
  struct Part {
    KahanSum sum, sumsq;
  };
  auto parts = chunked_map<Part>(samples, chunk, [&](std::uint64_t b, std::uint64_t e) {
    Part p;
    std::vector<std::uint64_t> offs(corners);
    std::vector<std::uint64_t> h(d), h2(d);
    std::vector<std::vector<cd>> shifted(corners, std::vector<cd>(g.order));
    for (std::uint64_t s = b; s < e; ++s) {
      for (std::size_t i = 0; i < d; ++i) {
        h[i] = qs[i].sample_index(stream, s * 2 * d + 2 * i);
        h2[i] = qs[i].sample_index(stream, s * 2 * d + 2 * i + 1);
      }
      for (std::size_t w = 0; w < corners; ++w) {
        std::uint64_t o = 0;
        for (std::size_t i = 0; i < d; ++i)
          o = index_add(g, o, (w >> i) & 1 ? h2[i] : h[i]);
        offs[w] = o;
      }
      for (std::size_t w = 0; w < corners; ++w) {
        bool conj_it = (std::popcount(w) & 1) != 0;
        auto& dst = shifted[w];
        normdetail::for_each_shifted(g, offs[w], [&](std::uint64_t x, std::uint64_t y) {
          dst[x] = conj_it ? std::conj(f.values[y]) : f.values[y];
        });
      }
      KahanSumC xint;
      for (std::uint64_t x = 0; x < g.order; ++x) {
        cd prod = shifted[0][x];
        for (std::size_t w = 1; w < corners; ++w) prod *= shifted[w][x];
        xint.add(prod);
      }
      double val = (xint.value() / static_cast<double>(g.order)).real();
      p.sum.add(val);
      p.sumsq.add(val * val);
    }
    return p;
  });
  KahanSum sum, sumsq;
  for (const auto& p : parts) {
    sum.add(p.sum.value());
    sumsq.add(p.sumsq.value());
  }
  double n = static_cast<double>(samples);
  double meanv = sum.value() / n;
  double var = samples > 1 ? std::max(0.0, (sumsq.value() - n * meanv * meanv) / (n - 1.0)) : 0.0;

  NormResult r;
  r.method = NormMethod::monte_carlo;
  r.degree = static_cast<int>(d);
  r.samples = samples;
  r.base_power_mean = meanv;
  r.std_error = std::sqrt(var / n);
  r.value = meanv <= 0.0 ? 0.0 : std::pow(meanv, 1.0 / std::ldexp(1.0, static_cast<int>(d)));
  return r;
}

// Gowers inner product of a 2^d-tuple (f_w) indexed by corners of the cube.
// The common shift is absorbed by the x-integral, so the average runs over
// the collapsed difference multisets.
inline cd gowers_inner_product(const std::vector<FunctionTable>& fs, const std::vector<ShiftSet>& qs,
                               double budget = kDefaultNormBudget) {
  const std::size_t d = qs.size();
  if (d == 0) throw argument_error("gowers inner product: d must be >= 1");
  const std::size_t corners = std::size_t(1) << d;
  if (fs.size() != corners)
    throw argument_error("gowers inner product: need exactly 2^d functions");
  const GroupSpec& g = fs[0].group;
  for (const auto& f : fs)
    if (f.group != g) throw structural_error("gowers inner product: group mismatch");
  for (const auto& q : qs)
    if (q.group() != g) throw structural_error("gowers inner product: shift set on wrong group");

  double est = normdetail::estimate_exact_cost(g, qs) * static_cast<double>(corners);
  if (est > budget)
    throw resource_error("gowers inner product cost estimate exceeds budget", est);

  std::vector<const Multiset*> diffs;
  std::vector<double> inv_sq;
  for (const auto& q : qs) {
    diffs.push_back(&q.difference_histogram());
    double t = static_cast<double>(q.total());
    inv_sq.push_back(1.0 / (t * t));
  }

  // Pre-shift each f_w by every needed offset lazily: iterate the product of
  // difference supports with an odometer over entry positions.
  std::vector<std::size_t> pos(d, 0);
  KahanSumC acc;
  std::vector<std::vector<cd>> shifted(corners, std::vector<cd>(g.order));
  for (;;) {
    double w = 1.0;
    std::vector<std::uint64_t> k(d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto& [ki, mi] = diffs[i]->entries[pos[i]];
      k[i] = ki;
      w *= static_cast<double>(mi) * inv_sq[i];
    }
    for (std::size_t c = 0; c < corners; ++c) {
      std::uint64_t o = 0;
      for (std::size_t i = 0; i < d; ++i)
        if ((c >> i) & 1) o = index_add(g, o, k[i]);
      bool conj_it = (std::popcount(c) & 1) != 0;
      auto& dst = shifted[c];
      const auto& src = fs[c].values;
      normdetail::for_each_shifted(g, o, [&](std::uint64_t x, std::uint64_t y) {
        dst[x] = conj_it ? std::conj(src[y]) : src[y];
      });
    }
    KahanSumC xint;
    for (std::uint64_t x = 0; x < g.order; ++x) {
      cd prod = shifted[0][x];
      for (std::size_t c = 1; c < corners; ++c) prod *= shifted[c][x];
      xint.add(prod);
    }
    acc.add(xint.value() / static_cast<double>(g.order) * w);

    std::size_t i = 0;
    for (; i < d; ++i) {
      if (++pos[i] < diffs[i]->entries.size()) break;
      pos[i] = 0;
    }
    if (i == d) break;
  }
  return acc.value();
}

}  // namespace gowers
