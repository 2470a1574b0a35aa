#include "lacuna/spectra.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace lacuna {

struct SpectralSet::Node {
  enum class Kind { Explicit, Cofinite, APUnion, Family, Union, Difference, Shift, Negate, BandLimit };

  Kind kind;

  // Explicit
  std::vector<std::int64_t> elements;  // sorted, unique
  // Cofinite
  std::vector<std::int64_t> excluded;  // sorted, unique
  bool over_zplus = false;
  // APUnion
  std::vector<std::pair<std::int64_t, std::int64_t>> progressions;  // (modulus, residue)
  SignRestrict restrict_to = SignRestrict::None;
  // Family
  FamilyTag tag = FamilyTag::NegPowers;
  std::int64_t param = 2;
  std::int64_t truncation = kDefaultBandHalfWidth;
  // Children
  std::shared_ptr<const Node> a, b;
  std::int64_t offset = 0;
  Band window;
};

namespace {

using Node = SpectralSet::Node;
using Kind = Node::Kind;
using Sign = SpectralSet::SignRestrict;
using Fam = SpectralSet::FamilyTag;

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool family_member(const Node& node, std::int64_t k) {
  switch (node.tag) {
    case Fam::NegPowers: {
      if (k >= 0 || -k > node.truncation) return false;
      std::int64_t v = node.param;
      while (v <= -k) {
        if (v == -k) return true;
        if (v > node.truncation / node.param + 1) break;
        v *= node.param;
      }
      return false;
    }
    case Fam::NegSquares: {
      if (k >= 0 || -k > node.truncation) return false;
      std::int64_t r = static_cast<std::int64_t>(std::llround(std::sqrt(double(-k))));
      for (std::int64_t c = std::max<std::int64_t>(1, r - 1); c <= r + 1; ++c) {
        if (c * c == -k) return true;
      }
      return false;
    }
    case Fam::NegPrimes:
      return k < 0 && -k <= node.truncation && is_prime(-k);
    case Fam::PosPowers: {
      if (k < 1 || k > node.truncation) return false;
      std::int64_t v = 1;
      while (v <= k) {
        if (v == k) return true;
        if (v > node.truncation / node.param + 1) break;
        v *= node.param;
      }
      return false;
    }
  }
  return false;
}

bool node_contains(const Node& node, std::int64_t k) {
  switch (node.kind) {
    case Kind::Explicit:
      return std::binary_search(node.elements.begin(), node.elements.end(), k);
    case Kind::Cofinite:
      if (node.over_zplus && k < 0) return false;
      return !std::binary_search(node.excluded.begin(), node.excluded.end(), k);
    case Kind::APUnion: {
      if (node.restrict_to == Sign::NonNegative && k < 0) return false;
      if (node.restrict_to == Sign::Negative && k >= 0) return false;
      for (const auto& [n, r] : node.progressions) {
        if (((k % n) + n) % n == r) return true;
      }
      return false;
    }
    case Kind::Family:
      return family_member(node, k);
    case Kind::Union:
      return node_contains(*node.a, k) || node_contains(*node.b, k);
    case Kind::Difference:
      return node_contains(*node.a, k) && !node_contains(*node.b, k);
    case Kind::Shift:
      return node_contains(*node.a, k - node.offset);
    case Kind::Negate:
      return node_contains(*node.a, -k);
    case Kind::BandLimit:
      return node.window.contains(k) && node_contains(*node.a, k);
  }
  return false;
}

// Collect (modulus, residue) pairs when the descriptor is a union/shift/negation
// of unrestricted arithmetic progressions; nullopt otherwise.
std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> pure_ap_list(const Node& node) {
  switch (node.kind) {
    case Kind::APUnion: {
      if (node.restrict_to != Sign::None) return std::nullopt;
      return node.progressions;
    }
    case Kind::Union: {
      auto la = pure_ap_list(*node.a);
      auto lb = pure_ap_list(*node.b);
      if (!la || !lb) return std::nullopt;
      la->insert(la->end(), lb->begin(), lb->end());
      return la;
    }
    case Kind::Shift: {
      auto la = pure_ap_list(*node.a);
      if (!la) return std::nullopt;
      for (auto& [n, r] : *la) r = (((r + node.offset) % n) + n) % n;
      return la;
    }
    case Kind::Negate: {
      auto la = pure_ap_list(*node.a);
      if (!la) return std::nullopt;
      for (auto& [n, r] : *la) r = ((-r % n) + n) % n;
      return la;
    }
    default:
      return std::nullopt;
  }
}

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Full element list of a structurally finite descriptor, nullopt otherwise.
std::optional<std::vector<std::int64_t>> finite_node_elements(const Node& n) {
  switch (n.kind) {
    case Kind::Explicit:
      return n.elements;
    case Kind::Family: {
      std::vector<std::int64_t> out;
      for (std::int64_t k = -n.truncation; k <= n.truncation; ++k) {
        if (family_member(n, k)) out.push_back(k);
      }
      return out;
    }
    case Kind::Union: {
      auto ea = finite_node_elements(*n.a);
      auto eb = finite_node_elements(*n.b);
      if (!ea || !eb) return std::nullopt;
      ea->insert(ea->end(), eb->begin(), eb->end());
      return sorted_unique(std::move(*ea));
    }
    case Kind::BandLimit: {
      if (n.window.width() > (std::int64_t(1) << 22)) return std::nullopt;
      std::vector<std::int64_t> out;
      for (std::int64_t k = n.window.lo; k <= n.window.hi; ++k) {
        if (node_contains(n, k)) out.push_back(k);
      }
      return out;
    }
    case Kind::Shift: {
      auto ea = finite_node_elements(*n.a);
      if (!ea) return std::nullopt;
      for (std::int64_t& k : *ea) k += n.offset;
      return ea;
    }
    case Kind::Negate: {
      auto ea = finite_node_elements(*n.a);
      if (!ea) return std::nullopt;
      for (std::int64_t& k : *ea) k = -k;
      return sorted_unique(std::move(*ea));
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

SpectralSet::SpectralSet() : SpectralSet(explicit_set({})) {}

SpectralSet::SpectralSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

SpectralSet SpectralSet::explicit_set(std::vector<std::int64_t> elements) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Explicit;
  n->elements = sorted_unique(std::move(elements));
  return SpectralSet(n);
}

SpectralSet SpectralSet::cofinite_z(std::vector<std::int64_t> excluded) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cofinite;
  std::sort(excluded.begin(), excluded.end());
  if (std::adjacent_find(excluded.begin(), excluded.end()) != excluded.end()) {
    throw PreconditionError("cofinite descriptor: excluded integers must be pairwise distinct");
  }
  n->excluded = std::move(excluded);
  n->over_zplus = false;
  return SpectralSet(n);
}

SpectralSet SpectralSet::cofinite_zplus(std::vector<std::int64_t> excluded) {
  for (std::int64_t k : excluded) {
    if (k < 0) {
      throw PreconditionError("cofinite-in-Zplus descriptor: excluded integers must be >= 0");
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cofinite;
  std::sort(excluded.begin(), excluded.end());
  if (std::adjacent_find(excluded.begin(), excluded.end()) != excluded.end()) {
    throw PreconditionError("cofinite descriptor: excluded integers must be pairwise distinct");
  }
  n->excluded = std::move(excluded);
  n->over_zplus = true;
  return SpectralSet(n);
}

SpectralSet SpectralSet::integers() { return arithmetic(1, 0); }

SpectralSet SpectralSet::nonnegative() {
  return ap_union({{1, 0}}, SignRestrict::NonNegative);
}

SpectralSet SpectralSet::negative() { return ap_union({{1, 0}}, SignRestrict::Negative); }

SpectralSet SpectralSet::arithmetic(std::int64_t modulus, std::int64_t residue) {
  return ap_union({{modulus, residue}});
}

SpectralSet SpectralSet::ap_union(std::vector<std::pair<std::int64_t, std::int64_t>> progressions,
                                  SignRestrict restrict_to) {
  if (progressions.empty()) {
    throw PreconditionError("ap_union: at least one progression required");
  }
  for (auto& [n, r] : progressions) {
    if (n < 1) throw PreconditionError("ap_union: modulus must be >= 1");
    r = ((r % n) + n) % n;
  }
  std::sort(progressions.begin(), progressions.end());
  progressions.erase(std::unique(progressions.begin(), progressions.end()), progressions.end());
  auto node = std::make_shared<Node>();
  node->kind = Kind::APUnion;
  node->progressions = std::move(progressions);
  node->restrict_to = restrict_to;
  return SpectralSet(node);
}

SpectralSet SpectralSet::family(FamilyTag tag, std::int64_t param, std::int64_t truncation) {
  if ((tag == FamilyTag::NegPowers || tag == FamilyTag::PosPowers) && param < 2) {
    throw PreconditionError("family: power base must be >= 2");
  }
  if (truncation < 1) throw PreconditionError("family: truncation must be >= 1");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Family;
  node->tag = tag;
  node->param = param;
  node->truncation = truncation;
  return SpectralSet(node);
}

SpectralSet SpectralSet::union_of(SpectralSet a, SpectralSet b) {
  // Coalesce unions of like-restricted AP descriptors so that, e.g.,
  // AP(3,0)|AP(3,1) is a single progression union with an exact period.
  if (a.node_->kind == Kind::APUnion && b.node_->kind == Kind::APUnion &&
      a.node_->restrict_to == b.node_->restrict_to) {
    auto progressions = a.node_->progressions;
    progressions.insert(progressions.end(), b.node_->progressions.begin(),
                        b.node_->progressions.end());
    SpectralSet out = ap_union(std::move(progressions), a.node_->restrict_to);
    out.band_half_ = std::max(a.band_half_, b.band_half_);
    return out;
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Union;
  node->a = a.node_;
  node->b = b.node_;
  SpectralSet out(node);
  out.band_half_ = std::max(a.band_half_, b.band_half_);
  return out;
}

SpectralSet SpectralSet::sign_restricted(SpectralSet a, SignRestrict sign) {
  if (sign == SignRestrict::None) return a;
  if (a.node_->kind == Kind::APUnion && a.node_->restrict_to == SignRestrict::None) {
    SpectralSet out = ap_union(a.node_->progressions, sign);
    out.band_half_ = a.band_half_;
    return out;
  }
  SpectralSet removed = (sign == SignRestrict::NonNegative) ? negative() : nonnegative();
  return difference(std::move(a), std::move(removed));
}

SpectralSet SpectralSet::difference(SpectralSet a, SpectralSet b) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Difference;
  node->a = a.node_;
  node->b = b.node_;
  SpectralSet out(node);
  out.band_half_ = std::max(a.band_half_, b.band_half_);
  return out;
}

SpectralSet SpectralSet::shifted(SpectralSet a, std::int64_t offset) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Shift;
  node->a = a.node_;
  node->offset = offset;
  SpectralSet out(node);
  out.band_half_ = a.band_half_;
  return out;
}

SpectralSet SpectralSet::negated(SpectralSet a) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Negate;
  node->a = a.node_;
  SpectralSet out(node);
  out.band_half_ = a.band_half_;
  return out;
}

SpectralSet SpectralSet::band_limited(SpectralSet a, Band window) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::BandLimit;
  node->a = a.node_;
  node->window = window;
  SpectralSet out(node);
  out.band_half_ = a.band_half_;
  return out;
}

SpectralSet SpectralSet::with_default_band(std::int64_t half_width) const {
  if (half_width < 1) throw PreconditionError("default band half-width must be >= 1");
  SpectralSet out = *this;
  out.band_half_ = half_width;
  return out;
}

bool SpectralSet::contains(std::int64_t k) const { return node_contains(*node_, k); }

namespace {

void check_enumerable(Band band) {
  if (band.width() > (std::int64_t(1) << 22)) {
    throw PreconditionError("band too wide to enumerate (" + std::to_string(band.width()) +
                            " integers)");
  }
}

}  // namespace

std::vector<std::int64_t> SpectralSet::elements_in(Band band) const {
  check_enumerable(band);
  std::vector<std::int64_t> out;
  for (std::int64_t k = band.lo; k <= band.hi; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::vector<std::int64_t> SpectralSet::complement_in(Band band) const {
  check_enumerable(band);
  std::vector<std::int64_t> out;
  for (std::int64_t k = band.lo; k <= band.hi; ++k) {
    if (!contains(k)) out.push_back(k);
  }
  return out;
}

std::optional<SpectralSet::Period> SpectralSet::period(std::int64_t max_period) const {
  if (max_period < 1) throw PreconditionError("period: max_period must be >= 1");

  if (auto aps = pure_ap_list(*node_)) {
    std::int64_t lcm = 1;
    bool overflow = false;
    for (const auto& [n, r] : *aps) {
      lcm = std::lcm(lcm, n);
      if (lcm > (std::int64_t(1) << 20)) {
        overflow = true;
        break;
      }
    }
    if (!overflow) {
      // The set is lcm-periodic, so its minimal period divides the lcm.
      std::vector<char> table(static_cast<std::size_t>(lcm), 0);
      for (std::int64_t x = 0; x < lcm; ++x) table[x] = node_contains(*node_, x) ? 1 : 0;
      for (std::int64_t d = 1; d <= lcm; ++d) {
        if (lcm % d != 0) continue;
        bool ok = true;
        for (std::int64_t x = 0; x < lcm && ok; ++x) {
          ok = table[static_cast<std::size_t>(x)] ==
               table[static_cast<std::size_t>((x + d) % lcm)];
        }
        if (ok) {
          if (d > max_period) return std::nullopt;
          return Period{d, true};
        }
      }
      return std::nullopt;
    }
  }

  // Heuristic screening: verify the translation identity on the default band.
  Band band = default_band();
  for (std::int64_t n = 1; n <= max_period; ++n) {
    bool ok = true;
    for (std::int64_t k = band.lo + n; k <= band.hi && ok; ++k) {
      ok = contains(k) == contains(k - n);
    }
    if (ok) return Period{n, false};
  }
  return std::nullopt;
}

bool SpectralSet::subset_of_nonnegative() const {
  struct Check {
    static bool run(const Node& n) {
      switch (n.kind) {
        case Kind::Explicit:
          return n.elements.empty() || n.elements.front() >= 0;
        case Kind::Cofinite:
          return n.over_zplus;
        case Kind::APUnion:
          return n.restrict_to == Sign::NonNegative;
        case Kind::Family:
          return n.tag == Fam::PosPowers;
        case Kind::Union:
          return run(*n.a) && run(*n.b);
        case Kind::Difference:
          return run(*n.a);
        case Kind::Shift:
          return n.offset >= 0 && run(*n.a);
        case Kind::Negate:
          return false;
        case Kind::BandLimit:
          return n.window.lo >= 0 || run(*n.a);
      }
      return false;
    }
  };
  return Check::run(*node_);
}

bool SpectralSet::is_all_nonnegative() const {
  const Node& n = *node_;
  if (n.kind == Kind::APUnion && n.restrict_to == Sign::NonNegative &&
      n.progressions.size() == 1 && n.progressions[0] == std::pair<std::int64_t, std::int64_t>{1, 0}) {
    return true;
  }
  return n.kind == Kind::Cofinite && n.over_zplus && n.excluded.empty();
}

bool SpectralSet::is_even_nonnegative() const {
  const Node& n = *node_;
  return n.kind == Kind::APUnion && n.restrict_to == Sign::NonNegative &&
         n.progressions.size() == 1 &&
         n.progressions[0] == std::pair<std::int64_t, std::int64_t>{2, 0};
}

std::optional<std::vector<std::int64_t>> SpectralSet::finite_complement_in_z() const {
  struct Walk {
    static std::optional<std::vector<std::int64_t>> run(const Node& n) {
      switch (n.kind) {
        case Kind::Cofinite:
          if (n.over_zplus) return std::nullopt;
          return n.excluded;
        case Kind::APUnion: {
          if (n.restrict_to != Sign::None) return std::nullopt;
          std::int64_t lcm = 1;
          for (const auto& [m, r] : n.progressions) lcm = std::lcm(lcm, m);
          if (lcm > (std::int64_t(1) << 20)) return std::nullopt;
          for (std::int64_t x = 0; x < lcm; ++x) {
            if (!node_contains(n, x)) return std::nullopt;
          }
          return std::vector<std::int64_t>{};
        }
        case Kind::Union: {
          auto ca = run(*n.a);
          if (ca) {
            std::vector<std::int64_t> out;
            for (std::int64_t k : *ca) {
              if (!node_contains(*n.b, k)) out.push_back(k);
            }
            return out;
          }
          auto cb = run(*n.b);
          if (cb) {
            std::vector<std::int64_t> out;
            for (std::int64_t k : *cb) {
              if (!node_contains(*n.a, k)) out.push_back(k);
            }
            return out;
          }
          return std::nullopt;
        }
        case Kind::Difference: {
          auto ca = run(*n.a);
          if (!ca) return std::nullopt;
          auto removed = finite_node_elements(*n.b);
          if (!removed) return std::nullopt;
          std::vector<std::int64_t> out = *ca;
          for (std::int64_t k : *removed) {
            if (node_contains(*n.a, k)) out.push_back(k);
          }
          return sorted_unique(std::move(out));
        }
        case Kind::Shift: {
          auto ca = run(*n.a);
          if (!ca) return std::nullopt;
          for (std::int64_t& k : *ca) k += n.offset;
          return ca;
        }
        case Kind::Negate: {
          auto ca = run(*n.a);
          if (!ca) return std::nullopt;
          for (std::int64_t& k : *ca) k = -k;
          return sorted_unique(std::move(*ca));
        }
        default:
          return std::nullopt;
      }
    }
  };
  auto out = Walk::run(*node_);
  if (out) {
    std::sort(out->begin(), out->end());
  }
  return out;
}

namespace {

// Zplus \ set for nodes known to describe subsets of Zplus.
std::optional<std::vector<std::int64_t>> zplus_complement(const Node& n) {
  switch (n.kind) {
    case Kind::Cofinite:
      return n.over_zplus ? std::optional(n.excluded) : std::nullopt;
    case Kind::APUnion: {
      if (n.restrict_to != Sign::NonNegative) return std::nullopt;
      std::int64_t lcm = 1;
      for (const auto& [m, r] : n.progressions) lcm = std::lcm(lcm, m);
      if (lcm > (std::int64_t(1) << 20)) return std::nullopt;
      for (std::int64_t x = 0; x < lcm; ++x) {
        if (!node_contains(n, x + lcm)) return std::nullopt;  // avoid the sign edge at 0
      }
      return std::vector<std::int64_t>{};
    }
    case Kind::Union: {
      if (auto ca = zplus_complement(*n.a)) {
        std::vector<std::int64_t> out;
        for (std::int64_t k : *ca) {
          if (!node_contains(*n.b, k)) out.push_back(k);
        }
        return out;
      }
      if (auto cb = zplus_complement(*n.b)) {
        std::vector<std::int64_t> out;
        for (std::int64_t k : *cb) {
          if (!node_contains(*n.a, k)) out.push_back(k);
        }
        return out;
      }
      return std::nullopt;
    }
    case Kind::Difference: {
      auto ca = zplus_complement(*n.a);
      if (!ca) return std::nullopt;
      auto removed = finite_node_elements(*n.b);
      if (!removed) return std::nullopt;
      std::vector<std::int64_t> out = *ca;
      for (std::int64_t k : *removed) {
        if (k >= 0 && node_contains(*n.a, k)) out.push_back(k);
      }
      return sorted_unique(std::move(out));
    }
    case Kind::Shift: {
      if (n.offset < 0) return std::nullopt;
      auto ca = zplus_complement(*n.a);
      if (!ca) return std::nullopt;
      std::vector<std::int64_t> out;
      for (std::int64_t k = 0; k < n.offset; ++k) out.push_back(k);
      for (std::int64_t k : *ca) out.push_back(k + n.offset);
      return out;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<std::vector<std::int64_t>> SpectralSet::finite_complement_in_zplus() const {
  if (!subset_of_nonnegative()) return std::nullopt;
  auto out = zplus_complement(*node_);
  if (out) std::sort(out->begin(), out->end());
  return out;
}

std::vector<std::string> SpectralSet::classify() const {
  std::vector<std::string> tags;

  if (auto p = period(band_half_)) {
    if (p->exact) tags.push_back("periodic");
  }
  if (finite_complement_in_z()) tags.push_back("cofinite-in-Z");
  if (subset_of_nonnegative() && finite_complement_in_zplus()) {
    tags.push_back("cofinite-in-Zplus");
  }

  // Flatten unions and look for "negative family  union  nonnegative rest".
  std::vector<const Node*> parts;
  struct Flatten {
    static void run(const Node& n, std::vector<const Node*>& out) {
      if (n.kind == Kind::Union) {
        run(*n.a, out);
        run(*n.b, out);
      } else {
        out.push_back(&n);
      }
    }
  };
  Flatten::run(*node_, parts);

  std::vector<const Node*> neg_families;
  bool rest_nonnegative = true;
  for (const Node* part : parts) {
    if (part->kind == Kind::Family && part->tag != Fam::PosPowers) {
      neg_families.push_back(part);
    } else {
      SpectralSet wrap(*this);
      wrap.node_ = std::shared_ptr<const Node>(node_, part);
      if (!wrap.subset_of_nonnegative()) rest_nonnegative = false;
    }
  }

  bool riesz = false;
  bool dset = false;
  if (subset_of_nonnegative()) {
    // Subsets of Zplus: F. and M. Riesz; vanishing on positive measure kills
    // an H^1 function.
    riesz = true;
    dset = true;
  } else if (neg_families.size() == 1 && rest_nonnegative &&
             parts.size() >= 2) {
    const Node* fam = neg_families.front();
    if (fam->tag == Fam::NegPowers || fam->tag == Fam::NegSquares ||
        fam->tag == Fam::NegPrimes) {
      riesz = true;
    }
    if (fam->tag == Fam::NegPowers && fam->param >= 2) {
      dset = true;
    }
  }
  if (riesz) tags.push_back("riesz-by-citation");
  if (dset) tags.push_back("dset-by-citation");

  std::sort(tags.begin(), tags.end());
  return tags;
}

// ---------------------------------------------------------------------------
// Canonical string form and parser
// ---------------------------------------------------------------------------

namespace {

std::string node_to_string(const Node& n);

std::string ap_to_string(const Node& n) {
  std::string body;
  if (n.progressions.size() == 1 && n.progressions[0].first == 1 && n.progressions[0].second == 0) {
    if (n.restrict_to == Sign::NonNegative) return "Zplus";
    if (n.restrict_to == Sign::Negative) return "Zminus";
    return "Z";
  }
  for (std::size_t i = 0; i < n.progressions.size(); ++i) {
    if (i) body += "|";
    body += "AP(" + std::to_string(n.progressions[i].first) + "," +
            std::to_string(n.progressions[i].second) + ")";
  }
  if (n.progressions.size() > 1 && n.restrict_to != Sign::None) body = "(" + body + ")";
  if (n.restrict_to == Sign::NonNegative) body += "&Zplus";
  if (n.restrict_to == Sign::Negative) body += "&Zminus";
  return body;
}

std::string list_to_string(const std::vector<std::int64_t>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "}";
}

std::string maybe_paren(const Node& n) {
  std::string s = node_to_string(n);
  if (n.kind == Kind::Union || n.kind == Kind::Difference || n.kind == Kind::Cofinite) {
    return "(" + s + ")";
  }
  return s;
}

std::string node_to_string(const Node& n) {
  switch (n.kind) {
    case Kind::Explicit:
      return list_to_string(n.elements);
    case Kind::Cofinite:
      return std::string(n.over_zplus ? "Zplus" : "Z") + " \\ " + list_to_string(n.excluded);
    case Kind::APUnion:
      return ap_to_string(n);
    case Kind::Family:
      switch (n.tag) {
        case Fam::NegPowers:
          return "negpow(" + std::to_string(n.param) + ")";
        case Fam::NegSquares:
          return "negsquares";
        case Fam::NegPrimes:
          return "negprimes";
        case Fam::PosPowers:
          return "pow(" + std::to_string(n.param) + ")";
      }
      return "?";
    case Kind::Union:
      return node_to_string(*n.a) + " | " + maybe_paren(*n.b);
    case Kind::Difference:
      return maybe_paren(*n.a) + " \\ " + maybe_paren(*n.b);
    case Kind::Shift:
      return "shift(" + node_to_string(*n.a) + "," + std::to_string(n.offset) + ")";
    case Kind::Negate:
      return "neg(" + node_to_string(*n.a) + ")";
    case Kind::BandLimit:
      return "band(" + node_to_string(*n.a) + "," + std::to_string(n.window.lo) + "," +
             std::to_string(n.window.hi) + ")";
  }
  return "?";
}

class SetParser {
 public:
  explicit SetParser(std::string_view text) : text_(text) {}

  SpectralSet parse() {
    SpectralSet s = parse_set();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return s;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  bool consume_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) == w) {
      std::size_t end = pos_ + w.size();
      if (end < text_.size() &&
          (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        return false;  // longer identifier
      }
      pos_ = end;
      return true;
    }
    return false;
  }

  std::int64_t parse_int() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw ParseError("expected an integer", start);
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  std::vector<std::int64_t> parse_int_list() {
    expect('{');
    std::vector<std::int64_t> out;
    skip_ws();
    if (consume('}')) return out;
    out.push_back(parse_int());
    while (consume(',')) out.push_back(parse_int());
    expect('}');
    return out;
  }

  SpectralSet parse_set() {
    SpectralSet lhs = parse_term();
    bool lhs_is_z = consumed_z_;
    bool lhs_is_zplus = consumed_zplus_;
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size()) break;
      char op = text_[pos_];
      if (op == '|' || op == '+') {
        ++pos_;
        lhs = SpectralSet::union_of(lhs, parse_term());
        lhs_is_z = lhs_is_zplus = false;
      } else if (op == '\\') {
        ++pos_;
        skip_ws();
        // "Z \ {..}" and "Zplus \ {..}" get the dedicated cofinite descriptor.
        if ((lhs_is_z || lhs_is_zplus) && pos_ < text_.size() && text_[pos_] == '{') {
          auto excl = parse_int_list();
          lhs = lhs_is_z ? SpectralSet::cofinite_z(std::move(excl))
                         : SpectralSet::cofinite_zplus(std::move(excl));
        } else {
          lhs = SpectralSet::difference(lhs, parse_term());
        }
        lhs_is_z = lhs_is_zplus = false;
      } else {
        break;
      }
    }
    return lhs;
  }

  SpectralSet parse_term() {
    SpectralSet atom = parse_atom();
    skip_ws();
    while (consume('&')) {
      if (consume_word("Zplus")) {
        atom = restrict_sign(atom, Sign::NonNegative);
      } else if (consume_word("Zminus")) {
        atom = restrict_sign(atom, Sign::Negative);
      } else {
        throw ParseError("expected Zplus or Zminus after '&'", pos_);
      }
      consumed_z_ = consumed_zplus_ = false;
    }
    return atom;
  }

  static SpectralSet restrict_sign(const SpectralSet& s, Sign sign) {
    return SpectralSet::sign_restricted(s, sign);
  }

  SpectralSet parse_atom() {
    consumed_z_ = consumed_zplus_ = false;
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);

    if (consume('(')) {
      SpectralSet inner = parse_set();
      expect(')');
      return inner;
    }
    if (text_[pos_] == '{') return SpectralSet::explicit_set(parse_int_list());

    if (consume_word("Zplus")) {
      consumed_zplus_ = true;
      return SpectralSet::nonnegative();
    }
    if (consume_word("Zminus")) return SpectralSet::negative();
    if (consume_word("Z")) {
      consumed_z_ = true;
      return SpectralSet::integers();
    }
    if (consume_word("AP")) {
      expect('(');
      std::int64_t n = parse_int();
      expect(',');
      std::int64_t r = parse_int();
      expect(')');
      return SpectralSet::arithmetic(n, r);
    }
    if (consume_word("negpow")) {
      expect('(');
      std::int64_t n = parse_int();
      expect(')');
      return SpectralSet::family(Fam::NegPowers, n);
    }
    if (consume_word("negsquares")) return SpectralSet::family(Fam::NegSquares);
    if (consume_word("negprimes")) return SpectralSet::family(Fam::NegPrimes);
    if (consume_word("pow2")) return SpectralSet::family(Fam::PosPowers, 2);
    if (consume_word("pow")) {
      expect('(');
      std::int64_t n = parse_int();
      expect(')');
      return SpectralSet::family(Fam::PosPowers, n);
    }
    if (consume_word("shift")) {
      expect('(');
      SpectralSet inner = parse_set();
      expect(',');
      std::int64_t n = parse_int();
      expect(')');
      return SpectralSet::shifted(inner, n);
    }
    if (consume_word("neg")) {
      expect('(');
      SpectralSet inner = parse_set();
      expect(')');
      return SpectralSet::negated(inner);
    }
    if (consume_word("band")) {
      expect('(');
      SpectralSet inner = parse_set();
      expect(',');
      std::int64_t lo = parse_int();
      expect(',');
      std::int64_t hi = parse_int();
      expect(')');
      return SpectralSet::band_limited(inner, Band(lo, hi));
    }
    throw ParseError("unknown set descriptor", pos_);
  }

  bool consumed_z_ = false;
  bool consumed_zplus_ = false;
};

bool nodes_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) {
    // "A \ Zminus" and native nonnegative APUnion restriction are the same set
    // structurally for Z-based atoms; keep comparison strict otherwise.
    return false;
  }
  switch (a.kind) {
    case Kind::Explicit:
      return a.elements == b.elements;
    case Kind::Cofinite:
      return a.excluded == b.excluded && a.over_zplus == b.over_zplus;
    case Kind::APUnion:
      return a.progressions == b.progressions && a.restrict_to == b.restrict_to;
    case Kind::Family:
      return a.tag == b.tag && a.param == b.param && a.truncation == b.truncation;
    case Kind::Union:
    case Kind::Difference:
      return nodes_equal(*a.a, *b.a) && nodes_equal(*a.b, *b.b);
    case Kind::Shift:
      return a.offset == b.offset && nodes_equal(*a.a, *b.a);
    case Kind::Negate:
      return nodes_equal(*a.a, *b.a);
    case Kind::BandLimit:
      return a.window.lo == b.window.lo && a.window.hi == b.window.hi &&
             nodes_equal(*a.a, *b.a);
  }
  return false;
}

}  // namespace

SpectralSet SpectralSet::parse(std::string_view text) { return SetParser(text).parse(); }

std::string SpectralSet::to_string() const { return node_to_string(*node_); }

bool SpectralSet::structurally_equal(const SpectralSet& other) const {
  return nodes_equal(*node_, *other.node_);
}

}  // namespace lacuna
