#include "wreathcycle/couplings.hpp"

#include <cmath>
#include <stdexcept>

namespace wreathcycle {
namespace {

CoupledPair finish(std::vector<double> discrete, double discrete_tail, std::vector<double> continuous,
                   double continuous_tail) {
  CoupledPair pair{Partition(std::move(discrete), discrete_tail),
                   Partition(std::move(continuous), continuous_tail), 0.0, 0.0};
  pair.linf = partition_distance(pair.discrete, pair.continuous, Norm::LInf);
  pair.l1 = partition_distance(pair.discrete, pair.continuous, Norm::L1);
  return pair;
}

}  // namespace

FellerDraw sample_feller(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_feller requires n >= 1");
  FellerDraw draw;
  draw.bits.assign(n + 1, 0);
  draw.bits[0] = 1;
  for (std::size_t i = 2; i <= n; ++i) draw.bits[i - 1] = rng.below(i) == 0 ? 1 : 0;
  draw.bits[n] = 1;
  draw.counts.assign(n, 0);
  std::size_t last_one = 0;
  for (std::size_t pos = 1; pos <= n; ++pos) {
    if (draw.bits[pos] == 0) continue;
    ++draw.counts[pos - last_one - 1];
    last_one = pos;
  }
  return draw;
}

ArrivalSet sample_log_poisson(double cutoff, Rng& rng) {
  if (!(cutoff > 0 && cutoff < 1)) throw std::invalid_argument("cutoff must lie in (0, 1)");
  ArrivalSet out{{}, cutoff};
  const double horizon = -std::log(cutoff);
  double s = rng.exponential();
  while (s < horizon) {
    out.times.push_back(std::exp(-s));
    s += rng.exponential();
  }
  return out;
}

AlignedPieces round_aligned(const ArrivalSet& arrivals, std::size_t n) {
  if (n == 0) throw std::invalid_argument("rounding requires n >= 1");
  if (arrivals.cutoff * static_cast<double>(n) > 1.0) {
    throw std::invalid_argument("arrival cutoff must not exceed 1/n");
  }
  AlignedPieces out;
  const auto scale = static_cast<double>(n);
  std::uint64_t prev_units = n;
  double prev_x = 1.0;
  for (double x : arrivals.times) {
    const auto units = static_cast<std::uint64_t>(std::floor(scale * x));
    out.discrete_units.push_back(prev_units - units);
    out.continuous.push_back(prev_x - x);
    prev_units = units;
    prev_x = x;
  }
  out.discrete_units.push_back(prev_units);
  out.continuous.push_back(prev_x - arrivals.cutoff);
  out.continuous_tail = arrivals.cutoff;
  out.discrete.reserve(out.discrete_units.size());
  for (auto u : out.discrete_units) out.discrete.push_back(static_cast<double>(u) / scale);
  return out;
}

std::pair<Partition, Partition> round_coupling(const ArrivalSet& arrivals, std::size_t n) {
  AlignedPieces pieces = round_aligned(arrivals, n);
  return {Partition(std::move(pieces.discrete), 0.0),
          Partition(std::move(pieces.continuous), pieces.continuous_tail)};
}

std::uint64_t pairing_index(std::uint64_t i, std::uint64_t j) {
  if (i == 0 || j == 0) throw std::invalid_argument("pairing_index is defined on positive integers");
  constexpr std::uint64_t kMax = ~std::uint64_t{0};
  if (i > 64 || j > kMax / 2 + 1) throw std::overflow_error("pairing_index exceeds 64 bits");
  const std::uint64_t odd = 2 * (j - 1) + 1;
  if (odd > (kMax >> (i - 1))) throw std::overflow_error("pairing_index exceeds 64 bits");
  return odd << (i - 1);
}

Partition combine_f(const Partition& a, std::span<const Partition> bs) {
  if (bs.size() < a.size()) throw std::invalid_argument("combine_f needs one block partition per part");
  std::vector<double> parts;
  double tail = a.tail_mass();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a.parts()[i];
    for (double b : bs[i].parts()) parts.push_back(ai * b);
    tail += ai * bs[i].tail_mass();
  }
  return Partition(std::move(parts), tail);
}

double default_cutoff(double eps, std::size_t n) {
  return std::min(eps, 1.0 / (4.0 * static_cast<double>(n)));
}

CoupledPair sample_coupled_pair(std::size_t k, std::size_t n, double eps, Rng& rng) {
  if (k == 0 || n == 0) throw std::invalid_argument("coupled pair requires k, n >= 1");
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("truncation eps must lie in (0, 1)");
  const AlignedPieces top = round_aligned(sample_log_poisson(default_cutoff(eps, n), rng), n);
  const double block_cutoff = default_cutoff(eps, k);

  std::vector<double> discrete;
  std::vector<double> continuous;
  double continuous_tail = top.continuous_tail;
  for (std::size_t i = 0; i < top.continuous.size(); ++i) {
    const AlignedPieces block = round_aligned(sample_log_poisson(block_cutoff, rng), k);
    const double a = top.discrete[i];
    const double alpha = top.continuous[i];
    if (a > 0) {
      for (double b : block.discrete) discrete.push_back(a * b);
    }
    for (double beta : block.continuous) continuous.push_back(alpha * beta);
    continuous_tail += alpha * block.continuous_tail;
  }
  return finish(std::move(discrete), 0.0, std::move(continuous), continuous_tail);
}

CoupledPair sample_coupled_pair(const BlockGroupSpec& spec, std::size_t n, double eps, Rng& rng) {
  if (n == 0) throw std::invalid_argument("coupled pair requires n >= 1");
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("truncation eps must lie in (0, 1)");
  const AlignedPieces top = round_aligned(sample_log_poisson(default_cutoff(eps, n), rng), n);
  const auto k = static_cast<double>(spec.block_size());

  std::vector<double> discrete;
  std::vector<double> continuous;
  for (std::size_t i = 0; i < top.continuous.size(); ++i) {
    // A top cycle of length m sees the product of its m block draws; an empty
    // discrete slot still needs one draw for the continuous side.
    const std::uint64_t m = std::max<std::uint64_t>(top.discrete_units[i], 1);
    Perm product = spec.sample(rng);
    for (std::uint64_t r = 1; r < m; ++r) product = compose(product, spec.sample(rng));
    const auto ct = product.cycle_type();
    for (auto len : ct.lengths()) {
      const double b = static_cast<double>(len) / k;
      if (top.discrete[i] > 0) discrete.push_back(top.discrete[i] * b);
      continuous.push_back(top.continuous[i] * b);
    }
  }
  return finish(std::move(discrete), 0.0, std::move(continuous), top.continuous_tail);
}

LcmPair sample_coupled_lcm(const BlockGroupSpec& spec, std::size_t n, Rng& rng,
                           const SpfTable& table) {
  const WreathElement w = sample_wreath(spec, n, rng);
  return {log_lcm(cycle_type_blockwise(w), table), log_lcm(w.top().cycle_type(), table)};
}

}  // namespace wreathcycle
