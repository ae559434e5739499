#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "nvrotor/linalg.hpp"

namespace nvrotor {

enum class Frame { Body, Space };

const char* to_string(Frame frame);

/// One product ket. In the body frame this is |J mJ kJ, K=1 kK>; in the space
/// frame |L mL kL; S=1 mS>. `spin` holds kK or mS.
struct BasisState {
  int j = 0;
  int m = 0;
  int k = 0;
  int spin = 0;

  friend bool operator==(const BasisState&, const BasisState&) = default;
  friend auto operator<=>(const BasisState&, const BasisState&) = default;
};

/// Truncated product basis, ordered lexicographically by (j, m, k, spin)
/// ascending. Immutable after construction.
class BasisSet {
 public:
  BasisSet(Frame frame, int cutoff);

  Frame frame() const { return frame_; }
  int cutoff() const { return cutoff_; }
  std::size_t dimension() const { return states_.size(); }
  std::size_t rotor_dimension() const { return states_.size() / 3; }

  const BasisState& state_of(std::size_t index) const { return states_.at(index); }
  const std::vector<BasisState>& states() const { return states_; }

  /// Index of a state, or nullopt when it lies outside the truncated space.
  std::optional<std::size_t> index_of(const BasisState& state) const;

  /// Index of the rotor part (j, m, k) in [0, rotor_dimension()).
  std::size_t rotor_index(std::size_t index) const { return index / 3; }
  /// Index of the spin part: spin + 1, i.e. 0, 1, 2 for -1, 0, +1.
  std::size_t spin_index(std::size_t index) const { return index % 3; }

  /// Conserved z-projection of a state: mJ (body) or mL + mS (space).
  int block_label(const BasisState& state) const;
  /// Second conserved label: kJ + kK (body) or kL (space).
  int sector_label(const BasisState& state) const;

  /// Partition of all indices by block_label, ascending labels.
  const std::map<int, std::vector<std::size_t>>& blocks() const { return blocks_; }
  /// Refined partition by (block_label, sector_label).
  const std::map<std::pair<int, int>, std::vector<std::size_t>>& sectors() const {
    return sectors_;
  }

  /// 3 * sum_{j<=cutoff} (2j+1)^2.
  static std::size_t dimension_for(int cutoff);

 private:
  Frame frame_;
  int cutoff_;
  std::vector<BasisState> states_;
  std::map<int, std::vector<std::size_t>> blocks_;
  std::map<std::pair<int, int>, std::vector<std::size_t>> sectors_;
};

using BasisPtr = std::shared_ptr<const BasisSet>;

BasisPtr build_body_basis(int j_max);
BasisPtr build_space_basis(int l_max);
BasisPtr build_basis(Frame frame, int cutoff);

/// Copies amplitudes of `from` into the larger basis `into` by matching
/// quantum numbers. Throws std::invalid_argument on mismatched frames or
/// when `from` is not contained in `into`.
ComplexVector embed(const ComplexVector& state, const BasisSet& from, const BasisSet& into);

/// Inverse of embed: keeps the amplitudes of states present in `onto`.
ComplexVector restrict_to(const ComplexVector& state, const BasisSet& from, const BasisSet& onto);

}  // namespace nvrotor
