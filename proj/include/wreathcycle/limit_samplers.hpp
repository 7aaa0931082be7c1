#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wreathcycle/partition.hpp"
#include "wreathcycle/perm.hpp"
#include "wreathcycle/rng.hpp"

namespace wreathcycle {

inline constexpr double kDefaultTruncation = 1e-6;

struct TrivialLaw {};
struct PoissonDirichletLaw {};

/// Cycle partition of a uniform rotation in C_m: a rotation of order l splits
/// into m/l cycles of length l, which happens with probability totient(l)/m.
class GeneralizedSymmetricLaw {
 public:
  explicit GeneralizedSymmetricLaw(unsigned m);
  unsigned m() const { return m_; }

 private:
  unsigned m_;
};

/// Normalized cycle type of a uniform draw from a block group spec.
struct EmpiricalGroupLaw {
  BlockGroupSpec group;
};

using BlockLaw = std::variant<TrivialLaw, PoissonDirichletLaw, GeneralizedSymmetricLaw, EmpiricalGroupLaw>;

std::string describe(const BlockLaw& law);

/// One outcome of a finite block law: cycle lengths over a common total.
struct BlockAtom {
  double probability;
  std::vector<std::uint64_t> lengths;  // nonincreasing
  std::uint64_t total;
};

/// Exact outcome list of a finite law, merged by cycle type. Returns nullopt
/// for the Poisson-Dirichlet law and for full symmetric groups larger than
/// `max_full_degree` (where enumerating integer partitions stops being cheap).
std::optional<std::vector<BlockAtom>> block_law_atoms(const BlockLaw& law,
                                                      std::size_t max_full_degree = 20);

/// Stick breaking: parts U1, (1-U1)U2, ... until the remaining stick drops below eps.
Partition sample_stick_breaking(double eps, Rng& rng);

/// Outer sticks of a square cut, the inner partition of each, and the flattened result.
struct SquareCut {
  std::vector<double> sticks;
  std::vector<Partition> inner;
  Partition pieces;
};

/// Square cutting: stick-break the unit mass to eps, then stick-break each
/// outer piece to relative mass eps. Total tail mass is at most 2 eps.
SquareCut sample_square_cut(double eps, Rng& rng);
Partition sample_square_cutting(double eps, Rng& rng);

/// One draw of the block partition. `eps` only matters for the Poisson-Dirichlet law.
Partition sample_block_law(const BlockLaw& law, Rng& rng, double eps = kDefaultTruncation);

/// A = (U B, (1-U) A): stick-break the unit mass and scale an independent block
/// partition into every stick.
Partition sample_A(const BlockLaw& law, double eps, Rng& rng);

/// counts[i-1] holds A_i.
struct CycleCountVector {
  std::vector<std::uint64_t> counts;
  std::size_t i_max() const { return counts.size(); }
  std::uint64_t operator[](std::size_t i) const { return counts[i - 1]; }
};

/// Compound-Poisson cycle counts: for each l draw N_l ~ Poisson(1/l); each of
/// the N_l occurrences carries independent Y^j ~ Poisson(1/j), and Y^j is
/// added to A_{l j}.
CycleCountVector sample_compound_cycle_counts(std::size_t i_max, std::size_t l_max, Rng& rng);

}  // namespace wreathcycle
