#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gowers/common.hpp"
#include "gowers/group.hpp"
#include "gowers/multiset.hpp"
#include "gowers/progression.hpp"

namespace gowers {

// A finite non-empty multiset of shifts, built from a coset progression or an
// explicit multiset.  Cheap to copy; the collapsed histogram and the
// difference multiset Q-Q are computed once on demand and shared.
class ShiftSet {
  struct Impl {
    GroupSpec group;
    std::optional<IndexSpace> space;   // progression source
    std::optional<Multiset> explicit_ms;
    std::string desc;

    std::once_flag hist_once, diff_once, cum_once;
    std::optional<Multiset> hist;
    std::optional<Multiset> diff;
    std::vector<std::uint64_t> cum;    // prefix multiplicities for multiset sampling
  };
  std::shared_ptr<Impl> impl_;

  explicit ShiftSet(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

  static Multiset dense_difference(const Multiset& h) {
    // mult_{Q-Q}(k) = sum_x mult(x) mult(x-k); accumulate into a dense table.
    const GroupSpec& g = h.group;
    std::vector<std::uint64_t> counts(g.order, 0);
    for (const auto& [ia, ma] : h.entries)
      for (const auto& [ib, mb] : h.entries)
        counts[index_sub(g, ia, ib)] += ma * mb;
    std::map<std::uint64_t, std::uint64_t> m;
    for (std::uint64_t i = 0; i < counts.size(); ++i)
      if (counts[i]) m[i] = counts[i];
    return Multiset::from_counts(g, m);
  }

 public:
  static ShiftSet from(const CosetProgression& q) {
    auto impl = std::make_shared<Impl>();
    impl->group = q.group;
    impl->space = IndexSpace::of(q);
    std::ostringstream os;
    os << "progression(rank " << q.rank() << ", |H|=" << q.subgroup.size() << ", |Q|="
       << impl->space->size << ")";
    impl->desc = os.str();
    return ShiftSet(std::move(impl));
  }

  static ShiftSet from(const Multiset& m) {
    auto impl = std::make_shared<Impl>();
    impl->group = m.group;
    impl->explicit_ms = m;
    std::ostringstream os;
    os << "multiset(support " << m.entries.size() << ", total " << m.total << ")";
    impl->desc = os.str();
    return ShiftSet(std::move(impl));
  }

  const GroupSpec& group() const { return impl_->group; }
  const std::string& describe() const { return impl_->desc; }

  std::uint64_t total() const {
    return impl_->space ? impl_->space->size : impl_->explicit_ms->total;
  }

  // Upper bound on |support(Q-Q)| available without materializing anything.
  double diff_support_bound() const {
    double order = static_cast<double>(impl_->group.order);
    if (impl_->space) {
      double b = static_cast<double>(impl_->space->subgroup_elems.size());
      for (auto w : impl_->space->half_width) b *= static_cast<double>(4 * w + 1);
      return std::min(order, b);
    }
    double s = static_cast<double>(impl_->explicit_ms->entries.size());
    return std::min(order, s * s);
  }

  const Multiset& histogram() const {
    std::call_once(impl_->hist_once, [&] {
      if (impl_->explicit_ms) {
        impl_->hist = *impl_->explicit_ms;
      } else {
        const IndexSpace& s = *impl_->space;
        std::map<std::uint64_t, std::uint64_t> counts;
        for (std::uint64_t t = 0; t < s.size; ++t) counts[s.element_index(t)]++;
        impl_->hist = Multiset::from_counts(impl_->group, counts);
      }
    });
    return *impl_->hist;
  }

  // Collapsed Q-Q with multiplicity; total = total(Q)^2.
  const Multiset& difference_histogram() const {
    std::call_once(impl_->diff_once, [&] { impl_->diff = dense_difference(histogram()); });
    return *impl_->diff;
  }

  // Uniform draw with multiplicity; pure in (stream, draw index).
  std::uint64_t sample_index(const RngStream& rng, std::uint64_t draw) const {
    if (impl_->space) return impl_->space->sample_index(rng, draw);
    std::call_once(impl_->cum_once, [&] {
      const Multiset& m = *impl_->explicit_ms;
      impl_->cum.reserve(m.entries.size());
      std::uint64_t acc = 0;
      for (const auto& [idx, c] : m.entries) {
        acc += c;
        impl_->cum.push_back(acc);
      }
    });
    std::uint64_t u = rng.below(draw, total());
    auto it = std::upper_bound(impl_->cum.begin(), impl_->cum.end(), u);
    return impl_->explicit_ms->entries[static_cast<std::size_t>(it - impl_->cum.begin())].first;
  }
};

}  // namespace gowers
