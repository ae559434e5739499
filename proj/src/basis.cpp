#include "nvrotor/basis.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace nvrotor {

namespace {

// Number of rotor kets with j' < j: sum_{j'<j} (2j'+1)^2 = j(2j-1)(2j+1)/3.
std::size_t rotor_offset(int j) {
  const auto jj = static_cast<std::size_t>(j);
  return jj * (2 * jj + 1) * (2 * jj - 1) / 3;
}

}  // namespace

const char* to_string(Frame frame) { return frame == Frame::Body ? "body" : "space"; }

std::size_t BasisSet::dimension_for(int cutoff) {
  if (cutoff < 0) return 0;
  return 3 * rotor_offset(cutoff + 1);
}

BasisSet::BasisSet(Frame frame, int cutoff) : frame_(frame), cutoff_(cutoff) {
  if (cutoff < 0) throw std::invalid_argument("basis cutoff must be non-negative");
  states_.reserve(dimension_for(cutoff));
  for (int j = 0; j <= cutoff; ++j)
    for (int m = -j; m <= j; ++m)
      for (int k = -j; k <= j; ++k)
        for (int s = -1; s <= 1; ++s) states_.push_back({j, m, k, s});
  for (std::size_t i = 0; i < states_.size(); ++i) {
    blocks_[block_label(states_[i])].push_back(i);
    sectors_[{block_label(states_[i]), sector_label(states_[i])}].push_back(i);
  }
}

std::optional<std::size_t> BasisSet::index_of(const BasisState& s) const {
  if (s.j < 0 || s.j > cutoff_ || std::abs(s.m) > s.j || std::abs(s.k) > s.j ||
      std::abs(s.spin) > 1)
    return std::nullopt;
  const auto width = static_cast<std::size_t>(2 * s.j + 1);
  const std::size_t rotor = rotor_offset(s.j) + static_cast<std::size_t>(s.m + s.j) * width +
                            static_cast<std::size_t>(s.k + s.j);
  return 3 * rotor + static_cast<std::size_t>(s.spin + 1);
}

int BasisSet::block_label(const BasisState& s) const {
  return frame_ == Frame::Body ? s.m : s.m + s.spin;
}

int BasisSet::sector_label(const BasisState& s) const {
  return frame_ == Frame::Body ? s.k + s.spin : s.k;
}

BasisPtr build_body_basis(int j_max) { return std::make_shared<const BasisSet>(Frame::Body, j_max); }

BasisPtr build_space_basis(int l_max) {
  return std::make_shared<const BasisSet>(Frame::Space, l_max);
}

BasisPtr build_basis(Frame frame, int cutoff) {
  return std::make_shared<const BasisSet>(frame, cutoff);
}

ComplexVector embed(const ComplexVector& state, const BasisSet& from, const BasisSet& into) {
  if (from.frame() != into.frame())
    throw std::invalid_argument("embed: bases belong to different frames");
  if (from.cutoff() > into.cutoff())
    throw std::invalid_argument("embed: source cutoff exceeds target cutoff");
  if (static_cast<std::size_t>(state.size()) != from.dimension())
    throw std::invalid_argument("embed: vector length does not match source basis");
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(into.dimension()));
  for (std::size_t i = 0; i < from.dimension(); ++i)
    out(static_cast<Eigen::Index>(*into.index_of(from.state_of(i)))) =
        state(static_cast<Eigen::Index>(i));
  return out;
}

ComplexVector restrict_to(const ComplexVector& state, const BasisSet& from, const BasisSet& onto) {
  if (from.frame() != onto.frame())
    throw std::invalid_argument("restrict_to: bases belong to different frames");
  if (onto.cutoff() > from.cutoff())
    throw std::invalid_argument("restrict_to: target cutoff exceeds source cutoff");
  if (static_cast<std::size_t>(state.size()) != from.dimension())
    throw std::invalid_argument("restrict_to: vector length does not match source basis");
  ComplexVector out(static_cast<Eigen::Index>(onto.dimension()));
  for (std::size_t i = 0; i < onto.dimension(); ++i)
    out(static_cast<Eigen::Index>(i)) =
        state(static_cast<Eigen::Index>(*from.index_of(onto.state_of(i))));
  return out;
}

}  // namespace nvrotor
