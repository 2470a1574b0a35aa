#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lacuna/common.hpp"

namespace lacuna {

// A finitely-describable subset of the integers: the admissible frequency
// sets that cut out lacunary subspaces of L^1 and L^infty on the circle.
//
// Descriptor grammar (also the canonical string form):
//   set    := term (('|' | '+' | '\') term)*        union / union / difference
//   term   := atom ('&' ('Zplus' | 'Zminus'))?       sign restriction
//   atom   := 'Z' | 'Zplus' | 'Zminus'
//           | 'AP(' n ',' r ')'                      arithmetic progression
//           | 'negpow(' n ')' | 'negsquares' | 'negprimes'
//           | 'pow(' n ')' | 'pow2'                  positive powers
//           | '{' k (',' k)* '}'
//           | 'shift(' set ',' n ')' | 'neg(' set ')'
//           | 'band(' set ',' lo ',' hi ')'
//           | '(' set ')'
// Named families are truncated at the default band edge.
class SpectralSet {
 public:
  enum class SignRestrict { None, NonNegative, Negative };
  enum class FamilyTag { NegPowers, NegSquares, NegPrimes, PosPowers };

  struct Node;  // descriptor tree, defined in the implementation

  SpectralSet();  // empty set

  static SpectralSet integers();
  static SpectralSet nonnegative();  // Zplus
  static SpectralSet negative();     // Zminus
  static SpectralSet explicit_set(std::vector<std::int64_t> elements);
  static SpectralSet cofinite_z(std::vector<std::int64_t> excluded);
  static SpectralSet cofinite_zplus(std::vector<std::int64_t> excluded);
  static SpectralSet arithmetic(std::int64_t modulus, std::int64_t residue);
  static SpectralSet ap_union(std::vector<std::pair<std::int64_t, std::int64_t>> progressions,
                              SignRestrict restrict_to = SignRestrict::None);
  static SpectralSet family(FamilyTag tag, std::int64_t param = 2,
                            std::int64_t truncation = kDefaultBandHalfWidth);
  static SpectralSet union_of(SpectralSet a, SpectralSet b);
  static SpectralSet difference(SpectralSet a, SpectralSet b);
  // Intersect with a half-line; AP unions keep their native restriction flag.
  static SpectralSet sign_restricted(SpectralSet a, SignRestrict sign);
  static SpectralSet shifted(SpectralSet a, std::int64_t offset);
  static SpectralSet negated(SpectralSet a);
  static SpectralSet band_limited(SpectralSet a, Band window);

  static SpectralSet parse(std::string_view text);
  std::string to_string() const;

  bool contains(std::int64_t k) const;
  std::vector<std::int64_t> elements_in(Band band) const;
  // Sorted integers of the band that are not in the set.
  std::vector<std::int64_t> complement_in(Band band) const;

  struct Period {
    std::int64_t value = 0;
    bool exact = false;  // false: verified on the default band only
  };
  // Minimal n <= max_period with set + n == set.  Exact for unions of
  // unrestricted arithmetic progressions; band-verified otherwise.
  std::optional<Period> period(std::int64_t max_period) const;

  // Metadata tags: periodic, cofinite-in-Z, cofinite-in-Zplus, and the
  // by-citation Riesz / D-set labels for the named families.  Citation tags
  // are literature facts, not computed proofs.
  std::vector<std::string> classify() const;

  // Z \ set when that is finite and structurally computable.
  std::optional<std::vector<std::int64_t>> finite_complement_in_z() const;
  // Zplus \ set when the set lies in Zplus and the complement is finite.
  std::optional<std::vector<std::int64_t>> finite_complement_in_zplus() const;

  bool subset_of_nonnegative() const;  // conservative structural check
  bool is_all_nonnegative() const;     // structurally equals Zplus
  bool is_even_nonnegative() const;    // structurally equals 2*Zplus

  Band default_band() const { return Band::symmetric(band_half_); }
  SpectralSet with_default_band(std::int64_t half_width) const;

  bool structurally_equal(const SpectralSet& other) const;

 private:
  explicit SpectralSet(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
  std::int64_t band_half_ = kDefaultBandHalfWidth;
};

}  // namespace lacuna
