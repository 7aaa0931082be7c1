#include "wreathcycle/perm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace wreathcycle {

CycleType::CycleType(std::vector<std::uint64_t> lengths) : lengths_(std::move(lengths)) {
  std::sort(lengths_.begin(), lengths_.end(), std::greater<>());
  for (auto l : lengths_) {
    if (l == 0) throw std::invalid_argument("cycle lengths must be positive");
    total_ += l;
  }
}

std::size_t CycleType::count_of(std::uint64_t length) const {
  return static_cast<std::size_t>(std::count(lengths_.begin(), lengths_.end(), length));
}

Perm::Perm(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  if (images_.empty()) throw std::invalid_argument("permutation must have positive size");
  std::vector<bool> seen(images_.size(), false);
  for (auto v : images_) {
    if (v >= images_.size() || seen[v]) throw std::invalid_argument("images are not a bijection");
    seen[v] = true;
  }
}

Perm Perm::identity(std::size_t m) {
  std::vector<std::uint32_t> images(m);
  std::iota(images.begin(), images.end(), 0u);
  return Perm(std::move(images));
}

Perm Perm::from_one_line(std::initializer_list<std::uint32_t> one_based) {
  std::vector<std::uint32_t> images;
  images.reserve(one_based.size());
  for (auto v : one_based) {
    if (v == 0) throw std::invalid_argument("one-line notation is one-based");
    images.push_back(v - 1);
  }
  return Perm(std::move(images));
}

Perm Perm::from_cycles(std::size_t m,
                       std::initializer_list<std::initializer_list<std::uint32_t>> cycles) {
  std::vector<std::uint32_t> images(m);
  std::iota(images.begin(), images.end(), 0u);
  std::vector<bool> used(m, false);
  for (const auto& cycle : cycles) {
    const std::vector<std::uint32_t> c(cycle);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::uint32_t from = c[i];
      const std::uint32_t to = c[(i + 1) % c.size()];
      if (from == 0 || from > m || to == 0 || to > m || used[from - 1]) {
        throw std::invalid_argument("malformed cycle notation");
      }
      used[from - 1] = true;
      images[from - 1] = to - 1;
    }
  }
  return Perm(std::move(images));
}

Perm Perm::inverse() const {
  std::vector<std::uint32_t> inv(images_.size());
  for (std::uint32_t i = 0; i < images_.size(); ++i) inv[images_[i]] = i;
  return Perm(std::move(inv));
}

CycleType Perm::cycle_type() const {
  std::vector<bool> seen(images_.size(), false);
  std::vector<std::uint64_t> lengths;
  for (std::uint32_t start = 0; start < images_.size(); ++start) {
    if (seen[start]) continue;
    std::uint64_t len = 0;
    for (std::uint32_t x = start; !seen[x]; x = images_[x]) {
      seen[x] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  return CycleType(std::move(lengths));
}

Perm compose(const Perm& outer, const Perm& inner) {
  if (outer.size() != inner.size()) throw std::invalid_argument("compose: size mismatch");
  std::vector<std::uint32_t> images(inner.size());
  for (std::uint32_t i = 0; i < images.size(); ++i) images[i] = outer(inner(i));
  return Perm(std::move(images));
}

Perm sample_perm(std::size_t m, Rng& rng) {
  if (m == 0) throw std::invalid_argument("sample_perm requires m >= 1");
  return Perm(rng.permutation(m));
}

BlockGroupSpec BlockGroupSpec::full(std::size_t k) {
  if (k == 0) throw std::invalid_argument("block size must be positive");
  return BlockGroupSpec(Kind::Full, k, {});
}

BlockGroupSpec BlockGroupSpec::cyclic(std::size_t k) {
  if (k == 0) throw std::invalid_argument("block size must be positive");
  return BlockGroupSpec(Kind::Cyclic, k, {});
}

BlockGroupSpec BlockGroupSpec::explicit_set(std::vector<Perm> support) {
  if (support.empty()) throw std::invalid_argument("explicit block support must be nonempty");
  const std::size_t k = support.front().size();
  for (const auto& p : support) {
    if (p.size() != k) throw std::invalid_argument("explicit block support has mixed sizes");
  }
  return BlockGroupSpec(Kind::Explicit, k, std::move(support));
}

Perm BlockGroupSpec::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::Full:
      return sample_perm(k_, rng);
    case Kind::Cyclic: {
      const auto shift = static_cast<std::uint32_t>(rng.below(k_));
      std::vector<std::uint32_t> images(k_);
      for (std::uint32_t i = 0; i < k_; ++i) images[i] = static_cast<std::uint32_t>((i + shift) % k_);
      return Perm(std::move(images));
    }
    case Kind::Explicit:
      return support_[rng.below(support_.size())];
  }
  throw std::logic_error("unreachable block kind");
}

WreathElement::WreathElement(std::vector<Perm> blocks, Perm top)
    : k_(blocks.empty() ? 0 : blocks.front().size()),
      blocks_(std::move(blocks)),
      top_(std::move(top)),
      top_inverse_(top_.inverse()) {
  if (blocks_.size() != top_.size()) {
    throw std::invalid_argument("wreath element needs one block permutation per block");
  }
  for (const auto& g : blocks_) {
    if (g.size() != k_) throw std::invalid_argument("block permutations must share a size");
  }
}

std::uint64_t WreathElement::apply(std::uint64_t point) const {
  if (point >= degree()) throw std::out_of_range("point outside {0, ..., kn-1}");
  const std::uint64_t block = point / k_;
  const auto offset = static_cast<std::uint32_t>(point % k_);
  const std::uint32_t source = top_inverse_(static_cast<std::uint32_t>(block));
  return static_cast<std::uint64_t>(source) * k_ + blocks_[source](offset);
}

Perm WreathElement::to_perm() const {
  std::vector<std::uint32_t> images(degree());
  for (std::uint64_t p = 0; p < images.size(); ++p) images[p] = static_cast<std::uint32_t>(apply(p));
  return Perm(std::move(images));
}

WreathElement sample_wreath(const BlockGroupSpec& spec, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_wreath requires n >= 1");
  std::vector<Perm> blocks;
  blocks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) blocks.push_back(spec.sample(rng));
  Perm top = sample_perm(n, rng);
  return WreathElement(std::move(blocks), std::move(top));
}

CycleType cycle_type_blockwise(const WreathElement& w) {
  const std::size_t k = w.block_size();
  const Perm& h = w.top();
  std::vector<bool> visited(w.block_count(), false);
  std::vector<std::uint32_t> orbit;
  std::vector<std::uint32_t> composite(k);
  std::vector<bool> seen(k);
  std::vector<std::uint64_t> lengths;

  for (std::uint32_t e = 0; e < w.block_count(); ++e) {
    if (visited[e]) continue;
    orbit.clear();
    for (std::uint32_t b = e; !visited[b]; b = h(b)) {
      visited[b] = true;
      orbit.push_back(b);
    }
    // composite = g_{orbit[0]} o g_{orbit[1]} o ... o g_{orbit[m-1]}
    const auto last = w.blocks()[orbit.back()].images();
    std::copy(last.begin(), last.end(), composite.begin());
    for (std::size_t i = orbit.size() - 1; i-- > 0;) {
      const Perm& g = w.blocks()[orbit[i]];
      for (auto& x : composite) x = g(x);
    }
    const std::uint64_t m = orbit.size();
    std::fill(seen.begin(), seen.end(), false);
    for (std::uint32_t s = 0; s < k; ++s) {
      if (seen[s]) continue;
      std::uint64_t len = 0;
      for (std::uint32_t x = s; !seen[x]; x = composite[x]) {
        seen[x] = true;
        ++len;
      }
      lengths.push_back(m * len);
    }
  }
  return CycleType(std::move(lengths));
}

double log_lcm(const CycleType& ct, const SpfTable& table) {
  if (ct.count() == 0) throw std::invalid_argument("log_lcm of an empty cycle type");
  std::map<std::uint64_t, unsigned> exponents;
  std::uint64_t previous = 0;
  for (auto len : ct.lengths()) {
    if (len == previous) continue;
    previous = len;
    if (len == 1) continue;
    if (len > table.limit()) throw std::out_of_range("cycle length exceeds the sieve");
    for (auto [p, e] : table.factorize(len)) {
      auto& slot = exponents[p];
      slot = std::max(slot, e);
    }
  }
  double total = 0;
  for (auto [p, e] : exponents) total += e * std::log(static_cast<double>(p));
  return total;
}

double log_lcm(const CycleType& ct) {
  const std::uint64_t largest = ct.count() ? ct.lengths().front() : 2;
  return log_lcm(ct, SpfTable(std::max<std::uint64_t>(largest, 2)));
}

double log_lcm_upto(std::uint64_t k) {
  std::vector<std::uint64_t> lengths(k);
  std::iota(lengths.begin(), lengths.end(), 1u);
  return log_lcm(CycleType(std::move(lengths)));
}

}  // namespace wreathcycle
