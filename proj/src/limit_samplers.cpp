#include "wreathcycle/limit_samplers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "wreathcycle/arith.hpp"

namespace wreathcycle {
namespace {

void check_truncation(double eps) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("truncation eps must lie in (0, 1)");
}

// Appends the stick-breaking pieces of `mass` (relative truncation eps) to
// `out` and returns the unexplored remainder.
double break_stick(double mass, double eps, Rng& rng, std::vector<double>& out) {
  double remaining = mass;
  const double stop = eps * mass;
  while (remaining >= stop) {
    const double piece = remaining * rng.uniform();
    out.push_back(piece);
    remaining -= piece;
  }
  return remaining;
}

void enumerate_full(std::size_t k, std::map<std::vector<std::uint64_t>, double>& types) {
  // Partitions of k as nonincreasing length lists; probability of a cycle
  // type is prod 1 / (i^{c_i} c_i!).
  std::vector<std::uint64_t> current;
  std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t left, std::uint64_t cap) {
    if (left == 0) {
      double prob = 1.0;
      std::size_t i = 0;
      while (i < current.size()) {
        std::size_t j = i;
        while (j < current.size() && current[j] == current[i]) ++j;
        const auto c = static_cast<double>(j - i);
        prob /= std::pow(static_cast<double>(current[i]), c) * std::tgamma(c + 1);
        i = j;
      }
      types[current] += prob;
      return;
    }
    for (std::uint64_t part = std::min(left, cap); part >= 1; --part) {
      current.push_back(part);
      rec(left - part, part);
      current.pop_back();
    }
  };
  rec(k, k);
}

}  // namespace

GeneralizedSymmetricLaw::GeneralizedSymmetricLaw(unsigned m) : m_(m) {
  if (m == 0) throw std::invalid_argument("generalized symmetric law requires m >= 1");
}

std::string describe(const BlockLaw& law) {
  struct {
    std::string operator()(const TrivialLaw&) const { return "trivial"; }
    std::string operator()(const PoissonDirichletLaw&) const { return "pd"; }
    std::string operator()(const GeneralizedSymmetricLaw& g) const {
      return "gsg:" + std::to_string(g.m());
    }
    std::string operator()(const EmpiricalGroupLaw& e) const {
      const auto k = std::to_string(e.group.block_size());
      switch (e.group.kind()) {
        case BlockGroupSpec::Kind::Full: return "full:" + k;
        case BlockGroupSpec::Kind::Cyclic: return "cyclic:" + k;
        case BlockGroupSpec::Kind::Explicit: return "explicit:" + k;
      }
      return "group";
    }
  } visitor;
  return std::visit(visitor, law);
}

std::optional<std::vector<BlockAtom>> block_law_atoms(const BlockLaw& law,
                                                      std::size_t max_full_degree) {
  std::map<std::vector<std::uint64_t>, double> types;
  std::uint64_t total = 1;
  if (std::holds_alternative<PoissonDirichletLaw>(law)) return std::nullopt;
  if (std::holds_alternative<TrivialLaw>(law)) {
    types[{1}] = 1.0;
  } else if (const auto* g = std::get_if<GeneralizedSymmetricLaw>(&law)) {
    total = g->m();
    for (std::uint64_t l = 1; l <= total; ++l) {
      if (total % l != 0) continue;
      types[std::vector<std::uint64_t>(total / l, l)] +=
          static_cast<double>(totient(l)) / static_cast<double>(total);
    }
  } else {
    const auto& group = std::get<EmpiricalGroupLaw>(law).group;
    total = group.block_size();
    switch (group.kind()) {
      case BlockGroupSpec::Kind::Full:
        if (total > max_full_degree) return std::nullopt;
        enumerate_full(total, types);
        break;
      case BlockGroupSpec::Kind::Cyclic:
        for (std::uint64_t r = 0; r < total; ++r) {
          const std::uint64_t cycles = gcd(r, total);
          types[std::vector<std::uint64_t>(cycles, total / cycles)] += 1.0 / static_cast<double>(total);
        }
        break;
      case BlockGroupSpec::Kind::Explicit: {
        const double w = 1.0 / static_cast<double>(group.support().size());
        for (const auto& p : group.support()) {
          const auto ct = p.cycle_type();
          types[std::vector<std::uint64_t>(ct.lengths().begin(), ct.lengths().end())] += w;
        }
        break;
      }
    }
  }
  std::vector<BlockAtom> atoms;
  atoms.reserve(types.size());
  for (auto& [lengths, prob] : types) atoms.push_back({prob, lengths, total});
  return atoms;
}

Partition sample_stick_breaking(double eps, Rng& rng) {
  check_truncation(eps);
  std::vector<double> parts;
  const double tail = break_stick(1.0, eps, rng, parts);
  return Partition(std::move(parts), tail);
}

SquareCut sample_square_cut(double eps, Rng& rng) {
  check_truncation(eps);
  SquareCut cut;
  double tail = break_stick(1.0, eps, rng, cut.sticks);
  std::vector<double> pieces;
  std::vector<double> inner;
  for (double stick : cut.sticks) {
    inner.clear();
    const double inner_tail = break_stick(1.0, eps, rng, inner);
    for (double f : inner) pieces.push_back(stick * f);
    tail += stick * inner_tail;
    cut.inner.emplace_back(inner, inner_tail);
  }
  cut.pieces = Partition(std::move(pieces), tail);
  return cut;
}

Partition sample_square_cutting(double eps, Rng& rng) { return sample_square_cut(eps, rng).pieces; }

Partition sample_block_law(const BlockLaw& law, Rng& rng, double eps) {
  if (std::holds_alternative<TrivialLaw>(law)) return Partition();
  if (std::holds_alternative<PoissonDirichletLaw>(law)) return sample_stick_breaking(eps, rng);
  if (const auto* g = std::get_if<GeneralizedSymmetricLaw>(&law)) {
    const std::uint64_t m = g->m();
    const std::uint64_t cycles = gcd(rng.below(m), m);
    return Partition(std::vector<double>(cycles, 1.0 / static_cast<double>(cycles)), 0.0);
  }
  const auto& group = std::get<EmpiricalGroupLaw>(law).group;
  const auto ct = group.sample(rng).cycle_type();
  const auto k = static_cast<double>(group.block_size());
  std::vector<double> parts;
  parts.reserve(ct.count());
  for (auto len : ct.lengths()) parts.push_back(static_cast<double>(len) / k);
  return Partition(std::move(parts), 0.0);
}

Partition sample_A(const BlockLaw& law, double eps, Rng& rng) {
  check_truncation(eps);
  std::vector<double> sticks;
  double tail = break_stick(1.0, eps, rng, sticks);
  std::vector<double> pieces;
  for (double stick : sticks) {
    const Partition block = sample_block_law(law, rng, eps);
    for (double b : block.parts()) pieces.push_back(stick * b);
    tail += stick * block.tail_mass();
  }
  return Partition(std::move(pieces), tail);
}

CycleCountVector sample_compound_cycle_counts(std::size_t i_max, std::size_t l_max, Rng& rng) {
  if (i_max == 0) throw std::invalid_argument("i_max must be positive");
  if (l_max < i_max) throw std::invalid_argument("l_max must be at least i_max");
  CycleCountVector out{std::vector<std::uint64_t>(i_max, 0)};
  // Occurrences with l > i_max only feed A_i for i > i_max.
  for (std::size_t l = 1; l <= i_max; ++l) {
    const std::uint32_t occurrences = rng.poisson(1.0 / static_cast<double>(l));
    for (std::uint32_t o = 0; o < occurrences; ++o) {
      for (std::size_t j = 1; j <= i_max; ++j) {
        const std::uint32_t y = rng.poisson(1.0 / static_cast<double>(j));
        if (l * j <= i_max) out.counts[l * j - 1] += y;
      }
    }
  }
  return out;
}

}  // namespace wreathcycle
