#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qftn/graded_tensor.hpp"

namespace qftn {

enum class ModelKind { SineGordon, MassiveSchwinger };

std::string to_string(ModelKind m);
ModelKind model_from_string(const std::string& s);

/// n(k) = floor(n_max/|k|) for |k| = 1..k_max, stored for both signs.
std::map<int, int> occupation_profile(int k_max, int n_max);

/// Truncated Fock space. Sites are ordered k = -k_max .. +k_max; site k_max is
/// the zero mode.
class ModeLayout {
 public:
  ModeLayout() = default;
  /// n_zm < 0 selects the default n_zm = n_max.
  ModeLayout(ModelKind model, int k_max, int n_max, int n_zm, double length);

  /// Replaces the cap of the non-zero modes (keyed by k). Used to keep the
  /// occupation profile fixed while k_max varies.
  ModeLayout with_caps(const std::map<int, int>& caps) const;

  ModelKind model() const { return model_; }
  int k_max() const { return k_max_; }
  int n_max() const { return n_max_; }
  int n_zm() const { return n_zm_; }
  double length() const { return length_; }

  int num_sites() const { return 2 * k_max_ + 1; }
  int mode(int site) const { return site - k_max_; }
  int site_of(int k) const { return k + k_max_; }
  int zero_site() const { return k_max_; }

  /// Occupation cap n(k) for k != 0; for k = 0 the zero-mode cutoff n_zm.
  int cap(int k) const { return caps_.at(site_of(k)); }
  /// Number of levels of site.
  int local_dim(int site) const;
  /// Charge of a level (k * n for non-zero modes, 0 for the zero mode).
  Charge level_charge(int site, int level) const;
  /// sG zero-mode label l = level - n_zm. Only meaningful on the zero site.
  int zero_mode_label(int level) const { return level - n_zm_; }

  /// Physical spaces (outgoing arrows, the MPS convention).
  const std::vector<GradedSpace>& mode_spaces() const { return spaces_; }
  const GradedSpace& space(int site) const { return spaces_[site]; }

  /// Position of a level inside the dense ordering of its GradedSpace.
  int dense_position(int site, int level) const;
  /// Level at dense position.
  int level_at(int site, int pos) const;

  /// Product of local dimensions (may overflow int, hence double).
  double total_dim() const;
  /// Stable 64-bit fingerprint of every field.
  std::uint64_t hash() const;

  bool operator==(const ModeLayout& o) const {
    return model_ == o.model_ && caps_ == o.caps_ && n_zm_ == o.n_zm_ && length_ == o.length_;
  }

 private:
  void rebuild();

  ModelKind model_ = ModelKind::SineGordon;
  int k_max_ = 1, n_max_ = 1, n_zm_ = 1;
  double length_ = 1.0;
  std::vector<int> caps_;
  std::vector<GradedSpace> spaces_;
};

/// Builds the spaces for an arbitrary mode list (used for reordering checks).
GradedSpace mode_space(ModelKind model, int k, int cap);

}  // namespace qftn
