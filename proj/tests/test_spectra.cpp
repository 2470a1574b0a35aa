#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lacuna/spectra.hpp"

using namespace lacuna;

namespace {

bool has_tag(const SpectralSet& s, const std::string& tag) {
  auto tags = s.classify();
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

}  // namespace

TEST_CASE("membership basics") {
  SpectralSet zplus = SpectralSet::nonnegative();
  CHECK(zplus.contains(0));
  CHECK(zplus.contains(17));
  CHECK_FALSE(zplus.contains(-1));

  SpectralSet cof = SpectralSet::cofinite_z({0});
  CHECK_FALSE(cof.contains(0));
  CHECK(cof.contains(7));
  CHECK(cof.contains(-3));

  SpectralSet lacunary = SpectralSet::parse("negpow(2)+Zplus");
  CHECK(lacunary.contains(-8));
  CHECK_FALSE(lacunary.contains(-6));
  CHECK(lacunary.contains(5));
  CHECK_FALSE(lacunary.contains(-3));
}

TEST_CASE("period detection") {
  auto p = SpectralSet::arithmetic(2, 0).period(64);
  REQUIRE(p.has_value());
  CHECK(p->value == 2);
  CHECK(p->exact);

  CHECK_FALSE(SpectralSet::nonnegative().period(64).has_value());

  SpectralSet two_of_three = SpectralSet::parse("AP(3,0)|AP(3,1)");
  // Residue-arithmetic oracle: shifting by 1 or 2 moves residue classes
  // {0,1} mod 3 onto {1,2} and {2,0}; only the shift by 3 fixes them.
  for (std::int64_t shift : {1, 2}) {
    bool fixed = true;
    for (std::int64_t k = -30; k <= 30; ++k) {
      fixed = fixed && (two_of_three.contains(k) == two_of_three.contains(k - shift));
    }
    CHECK_FALSE(fixed);
  }
  auto p3 = two_of_three.period(64);
  REQUIRE(p3.has_value());
  CHECK(p3->value == 3);
  CHECK(p3->exact);

  CHECK_THROWS_AS(two_of_three.period(0), PreconditionError);
  CHECK_FALSE(SpectralSet::explicit_set({0}).period(64).has_value());

  // Shift/negate of progressions stays exact.
  auto ps = SpectralSet::shifted(SpectralSet::arithmetic(4, 1), 3).period(64);
  REQUIRE(ps.has_value());
  CHECK(ps->value == 4);
  CHECK(ps->exact);

  // Non-AP descriptors fall back to band verification.
  SpectralSet banded = SpectralSet::band_limited(SpectralSet::integers(), Band(-1000, 1000));
  auto pb = banded.period(8);
  REQUIRE(pb.has_value());
  CHECK_FALSE(pb->exact);
}

TEST_CASE("complement in band") {
  SpectralSet cof = SpectralSet::cofinite_z({0, 5});
  CHECK(cof.complement_in(Band(-3, 7)) == std::vector<std::int64_t>{0, 5});

  CHECK(SpectralSet::nonnegative().complement_in(Band(-2, 2)) ==
        std::vector<std::int64_t>{-2, -1});

  SpectralSet no_pow2 = SpectralSet::parse("Zplus \\ pow2");
  CHECK(no_pow2.complement_in(Band(0, 9)) == std::vector<std::int64_t>{1, 2, 4, 8});
}

TEST_CASE("classification tags") {
  SpectralSet lac = SpectralSet::parse("negpow(2)+Zplus");
  CHECK(has_tag(lac, "riesz-by-citation"));
  CHECK(has_tag(lac, "dset-by-citation"));
  CHECK_FALSE(has_tag(lac, "periodic"));
  CHECK_FALSE(has_tag(lac, "cofinite-in-Z"));

  SpectralSet even = SpectralSet::arithmetic(2, 0);
  CHECK(has_tag(even, "periodic"));
  CHECK_FALSE(has_tag(even, "cofinite-in-Z"));
  CHECK_FALSE(has_tag(even, "riesz-by-citation"));

  SpectralSet cof = SpectralSet::cofinite_z({3, 7});
  CHECK(has_tag(cof, "cofinite-in-Z"));
  CHECK_FALSE(has_tag(cof, "periodic"));

  // negsquares and negprimes carry the Riesz citation but not the D-set one.
  CHECK(has_tag(SpectralSet::parse("negsquares+Zplus"), "riesz-by-citation"));
  CHECK_FALSE(has_tag(SpectralSet::parse("negsquares+Zplus"), "dset-by-citation"));
  CHECK(has_tag(SpectralSet::parse("negprimes+Zplus"), "riesz-by-citation"));

  // Subsets of the nonnegative integers inherit both citations.
  CHECK(has_tag(SpectralSet::nonnegative(), "riesz-by-citation"));
  CHECK(has_tag(SpectralSet::nonnegative(), "dset-by-citation"));
  CHECK(has_tag(SpectralSet::parse("Zplus \\ {0,5}"), "cofinite-in-Zplus"));

  CHECK_FALSE(has_tag(SpectralSet::integers(), "dset-by-citation"));
}

TEST_CASE("finite complements") {
  auto c1 = SpectralSet::cofinite_z({0, 5}).finite_complement_in_z();
  REQUIRE(c1.has_value());
  CHECK(*c1 == std::vector<std::int64_t>{0, 5});

  CHECK(SpectralSet::integers().finite_complement_in_z().has_value());
  CHECK(SpectralSet::integers().finite_complement_in_z()->empty());
  CHECK_FALSE(SpectralSet::nonnegative().finite_complement_in_z().has_value());
  CHECK_FALSE(SpectralSet::arithmetic(2, 0).finite_complement_in_z().has_value());

  // Union with an explicit set shrinks the complement.
  SpectralSet patched =
      SpectralSet::union_of(SpectralSet::cofinite_z({0, 5}), SpectralSet::explicit_set({5}));
  auto c2 = patched.finite_complement_in_z();
  REQUIRE(c2.has_value());
  CHECK(*c2 == std::vector<std::int64_t>{0});

  auto c3 = SpectralSet::nonnegative().finite_complement_in_zplus();
  REQUIRE(c3.has_value());
  CHECK(c3->empty());

  auto c4 = SpectralSet::parse("Zplus \\ {1,4}").finite_complement_in_zplus();
  REQUIRE(c4.has_value());
  CHECK(*c4 == std::vector<std::int64_t>{1, 4});

  CHECK_FALSE(SpectralSet::parse("AP(2,0)&Zplus").finite_complement_in_zplus().has_value());

  // Band-truncated family: the removed set is finite by construction.
  auto c5 = SpectralSet::parse("Zplus \\ pow2").finite_complement_in_zplus();
  REQUIRE(c5.has_value());
  CHECK(*c5 == std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 64});
}

TEST_CASE("structural recognizers") {
  CHECK(SpectralSet::nonnegative().is_all_nonnegative());
  CHECK(SpectralSet::parse("AP(2,0)&Zplus").is_even_nonnegative());
  CHECK_FALSE(SpectralSet::integers().is_all_nonnegative());
  CHECK(SpectralSet::parse("Zplus \\ {3}").subset_of_nonnegative());
  CHECK_FALSE(SpectralSet::parse("negpow(2)+Zplus").subset_of_nonnegative());
}

TEST_CASE("descriptor algebra invariants on random sets") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> pick(-40, 40);
  std::vector<SpectralSet> corpus = {
      SpectralSet::integers(),
      SpectralSet::nonnegative(),
      SpectralSet::arithmetic(3, 1),
      SpectralSet::cofinite_z({-2, 0, 9}),
      SpectralSet::parse("negpow(2)+Zplus"),
      SpectralSet::explicit_set({-5, 1, 2, 3, 30}),
      SpectralSet::parse("Zplus \\ pow2"),
  };
  Band band(-30, 30);
  for (const SpectralSet& a : corpus) {
    // complement_in and elements_in tile the band disjointly.
    auto inside = a.elements_in(band);
    auto outside = a.complement_in(band);
    CHECK(inside.size() + outside.size() == static_cast<std::size_t>(band.width()));
    std::vector<std::int64_t> merged;
    std::merge(inside.begin(), inside.end(), outside.begin(), outside.end(),
               std::back_inserter(merged));
    CHECK(std::adjacent_find(merged.begin(), merged.end()) == merged.end());

    for (const SpectralSet& b : corpus) {
      SpectralSet u = SpectralSet::union_of(a, b);
      for (int t = 0; t < 25; ++t) {
        std::int64_t k = pick(rng);
        CHECK(u.contains(k) == (a.contains(k) || b.contains(k)));
      }
    }
    SpectralSet sh = SpectralSet::shifted(a, 4);
    SpectralSet ng = SpectralSet::negated(a);
    for (int t = 0; t < 25; ++t) {
      std::int64_t k = pick(rng);
      CHECK(sh.contains(k) == a.contains(k - 4));
      CHECK(ng.contains(k) == a.contains(-k));
    }
  }
}

TEST_CASE("AP period divides the modulus lcm") {
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> cases = {
      {{4, 1}}, {{6, 0}, {4, 2}}, {{3, 0}, {3, 1}, {3, 2}}, {{5, 2}, {10, 7}}};
  for (const auto& aps : cases) {
    SpectralSet s = SpectralSet::ap_union(aps);
    std::int64_t lcm = 1;
    for (auto [n, r] : aps) lcm = std::lcm(lcm, n);
    auto p = s.period(lcm);
    REQUIRE(p.has_value());
    CHECK(p->exact);
    CHECK(lcm % p->value == 0);
    // Translation identity on a band.
    for (std::int64_t k = -50; k <= 50; ++k) {
      CHECK(s.contains(k) == s.contains(k + p->value));
    }
  }
}

TEST_CASE("descriptor grammar round-trips") {
  std::vector<std::string> corpus = {
      "Zplus",
      "Z",
      "Zminus",
      "Z \\ {0,5}",
      "Zplus \\ {0,2}",
      "AP(3,0)|AP(3,1)",
      "negpow(2) | Zplus",
      "Zplus \\ pow(2)",
      "{-3,1,2}",
      "shift(AP(2,0),1)",
      "neg(Zplus)",
      "band(Z,-8,8)",
      "AP(2,0)&Zplus",
      "negprimes | Zplus",
      "(AP(4,0)|AP(4,1))&Zplus",
  };
  for (const std::string& text : corpus) {
    CAPTURE(text);
    SpectralSet parsed = SpectralSet::parse(text);
    std::string canonical = parsed.to_string();
    SpectralSet reparsed = SpectralSet::parse(canonical);
    CHECK(parsed.structurally_equal(reparsed));
    CHECK(reparsed.to_string() == canonical);
  }

  // '+' and '|' are the same union.
  CHECK(SpectralSet::parse("negpow(2)+Zplus")
            .structurally_equal(SpectralSet::parse("negpow(2)|Zplus")));

  CHECK_THROWS_AS(SpectralSet::parse("Zplus \\"), ParseError);
  CHECK_THROWS_AS(SpectralSet::parse("AP(0,1)"), PreconditionError);
  CHECK_THROWS_AS(SpectralSet::parse("Z \\ {1,1}"), PreconditionError);
  CHECK_THROWS_AS(SpectralSet::parse("frob(3)"), ParseError);
  CHECK_THROWS_AS(SpectralSet::parse("AP(3,0) extra"), ParseError);
}

TEST_CASE("default band is configurable") {
  SpectralSet s = SpectralSet::parse("negpow(2)+Zplus");
  CHECK(s.default_band().hi == kDefaultBandHalfWidth);
  SpectralSet wide = s.with_default_band(128);
  CHECK(wide.default_band().hi == 128);
  CHECK_THROWS_AS(s.with_default_band(0), PreconditionError);
}
