#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/group.hpp"
#include "gowers/parallel.hpp"
#include "gowers/rng.hpp"

namespace gowers {

// Dense complex function on a finite group with the uniform probability
// measure; values addressed by the mixed-radix index.
struct FunctionTable {
  GroupSpec group;
  std::vector<cd> values;

  static FunctionTable constant(const GroupSpec& g, cd c) {
    return FunctionTable{g, std::vector<cd>(g.order, c)};
  }

  static FunctionTable zero(const GroupSpec& g) { return constant(g, cd{0.0, 0.0}); }

  static FunctionTable from_values(const GroupSpec& g, std::vector<cd> vals) {
    if (vals.size() != g.order) throw argument_error("function table length != group order");
    for (const cd& v : vals)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw argument_error("function table contains non-finite value");
    return FunctionTable{g, std::move(vals)};
  }

  // Indicator-style point mass: 1 at e, 0 elsewhere.
  static FunctionTable delta_at(const GroupSpec& g, const GroupElement& e) {
    FunctionTable f = zero(g);
    f.values[index_of(g, e)] = 1.0;
    return f;
  }

  static FunctionTable random_pm1(const GroupSpec& g, const RngStream& rng) {
    FunctionTable f = zero(g);
    for (std::uint64_t i = 0; i < g.order; ++i) f.values[i] = rng.sign(i);
    return f;
  }

  // Character chi_xi(x) = e(sum_i x_i xi_i / N_i).
  static FunctionTable character(const GroupSpec& g, const GroupElement& xi) {
    check_member(g, xi);
    FunctionTable f = zero(g);
    constexpr double tau = 6.283185307179586476925286766559;
    for (std::uint64_t i = 0; i < g.order; ++i) {
      GroupElement x = element_of(g, i);
      double phase = 0.0;
      for (std::size_t k = 0; k < g.arity(); ++k)
        phase += static_cast<double>(x.residues[k]) * static_cast<double>(xi.residues[k]) /
                 static_cast<double>(g.moduli[k]);
      f.values[i] = std::polar(1.0, tau * phase);
    }
    return f;
  }

  // e(x^2 / N) on a cyclic group (first coordinate when arity > 1).
  static FunctionTable quadratic_phase(const GroupSpec& g) {
    FunctionTable f = zero(g);
    constexpr double tau = 6.283185307179586476925286766559;
    double n0 = static_cast<double>(g.moduli[0]);
    for (std::uint64_t i = 0; i < g.order; ++i) {
      GroupElement x = element_of(g, i);
      double r = static_cast<double>(x.residues[0]);
      f.values[i] = std::polar(1.0, tau * std::fmod(r * r / n0, 1.0));
    }
    return f;
  }

  std::uint64_t order() const { return group.order; }
};

inline void check_same_group(const FunctionTable& f, const FunctionTable& g) {
  if (f.group != g.group) throw structural_error("function tables live on different groups");
}

// (T^g f)(x) = f(x - g).
inline FunctionTable shift(const FunctionTable& f, const GroupElement& g) {
  check_member(f.group, g);
  std::uint64_t gi = index_of(f.group, g);
  FunctionTable out = FunctionTable::zero(f.group);
  for (std::uint64_t x = 0; x < f.order(); ++x)
    out.values[x] = f.values[index_sub(f.group, x, gi)];
  return out;
}

// Delta_{h,h'} f = (T^h f) * conj(T^{h'} f).
inline FunctionTable delta(const FunctionTable& f, const GroupElement& h, const GroupElement& h2) {
  check_member(f.group, h);
  check_member(f.group, h2);
  std::uint64_t hi = index_of(f.group, h);
  std::uint64_t hj = index_of(f.group, h2);
  FunctionTable out = FunctionTable::zero(f.group);
  for (std::uint64_t x = 0; x < f.order(); ++x)
    out.values[x] = f.values[index_sub(f.group, x, hi)] *
                    std::conj(f.values[index_sub(f.group, x, hj)]);
  return out;
}

inline cd mean(const FunctionTable& f) {
  KahanSumC acc;
  for (const cd& v : f.values) acc.add(v);
  return acc.value() / static_cast<double>(f.order());
}

// <f, g> = E_x f(x) conj(g(x)).
inline cd inner(const FunctionTable& f, const FunctionTable& g) {
  check_same_group(f, g);
  KahanSumC acc;
  for (std::uint64_t x = 0; x < f.order(); ++x) acc.add(f.values[x] * std::conj(g.values[x]));
  return acc.value() / static_cast<double>(f.order());
}

inline double sup_norm(const FunctionTable& f) {
  double m = 0.0;
  for (const cd& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

inline double lp_norm(const FunctionTable& f, double p) {
  if (p == std::numeric_limits<double>::infinity()) return sup_norm(f);
  KahanSum acc;
  for (const cd& v : f.values) acc.add(std::pow(std::abs(v), p));
  return std::pow(acc.value() / static_cast<double>(f.order()), 1.0 / p);
}

inline double l2_norm(const FunctionTable& f) {
  KahanSum acc;
  for (const cd& v : f.values) acc.add(std::norm(v));
  return std::sqrt(acc.value() / static_cast<double>(f.order()));
}

inline FunctionTable conj(const FunctionTable& f) {
  FunctionTable out = f;
  for (auto& v : out.values) v = std::conj(v);
  return out;
}

inline FunctionTable pointwise_mul(const FunctionTable& f, const FunctionTable& g) {
  check_same_group(f, g);
  FunctionTable out = f;
  for (std::uint64_t x = 0; x < f.order(); ++x) out.values[x] *= g.values[x];
  return out;
}

inline FunctionTable linear_combination(cd a, const FunctionTable& f, cd b, const FunctionTable& g) {
  check_same_group(f, g);
  FunctionTable out = FunctionTable::zero(f.group);
  for (std::uint64_t x = 0; x < f.order(); ++x)
    out.values[x] = a * f.values[x] + b * g.values[x];
  return out;
}

inline FunctionTable scale_table(const FunctionTable& f, cd a) {
  FunctionTable out = f;
  for (auto& v : out.values) v *= a;
  return out;
}

// Conditional expectation onto H-invariant functions: the average of f over
// each H-coset, constant on cosets.  Exactly E_{a in H} T^a f.
inline FunctionTable invariant_projection(const FunctionTable& f, const Subgroup& h) {
  if (h.group != f.group) throw structural_error("invariant_projection: group mismatch");
  FunctionTable out = FunctionTable::zero(f.group);
  std::vector<char> done(f.order(), 0);
  std::vector<std::uint64_t> coset;
  for (std::uint64_t x = 0; x < f.order(); ++x) {
    if (done[x]) continue;
    coset.clear();
    KahanSumC acc;
    for (std::uint64_t a : h.elements) {
      std::uint64_t y = index_add(f.group, x, a);
      coset.push_back(y);
      acc.add(f.values[y]);
    }
    cd avg = acc.value() / static_cast<double>(h.elements.size());
    for (std::uint64_t y : coset) {
      out.values[y] = avg;
      done[y] = 1;
    }
  }
  return out;
}

}  // namespace gowers
