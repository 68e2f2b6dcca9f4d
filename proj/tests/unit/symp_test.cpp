#include <gtest/gtest.h>

#include <numeric>

#include "thetalab/sampling.hpp"
#include "thetalab/symp.hpp"

namespace thetalab {
namespace {

Characteristic C(const char* text) { return Characteristic::parse(text); }

// Product of random generators, so the sample covers more than the generators.
SpMod2Element random_element(int g, Rng& rng) {
  const auto gens = generators(GeneratorSet::Gg, g);
  SpMod2Element s = SpMod2Element::identity(g);
  for (int i = 0; i < 12; ++i) s = s * gens[rng.below(gens.size())];
  return s;
}

TEST(Act, IdentityFixesEverything) {
  for (const auto& m : enumerate(3)) EXPECT_EQ(act(SpMod2Element::identity(3), m), m);
}

TEST(Sigma0, SendsZeroToOddOnesAndIsSymplectic) {
  const auto s = sigma0();
  EXPECT_TRUE(s.is_symplectic());
  EXPECT_EQ(act(s, C("[00;00]")), C("[11;11]"));
  for (const auto& m : enumerate(2)) EXPECT_EQ(act(s, m).parity(), m.parity()) << m.compact();
}

TEST(Embed, ExtendsByIdentity) {
  EXPECT_EQ(embed(SpMod2Element::identity(2), {0, 1}, 4), SpMod2Element::identity(4));
  EXPECT_EQ(act(embed(sigma0(), {0, 1}, 4), Characteristic::zero(4)), C("[1100;1100]"));
  const auto t = embed(gamma1_t(), {2}, 4);
  for (const auto& m : enumerate(4)) {
    const auto image = act(t, m);
    for (int a : {0, 1, 3}) ASSERT_EQ(image.column(a), m.column(a));
  }
  EXPECT_THROW(embed(sigma0(), {0, 0}, 4), SymplecticError);
  EXPECT_THROW(embed(sigma0(), {0, 4}, 4), SymplecticError);
}

TEST(PermutationElement, PermutesColumns) {
  EXPECT_EQ(permutation_element({0, 1, 2}), SpMod2Element::identity(3));
  EXPECT_EQ(act(permutation_element({1, 0}), C("[10;11]")), C("[01;11]"));
  EXPECT_EQ(act(permutation_element({1, 0, 2}), C("[100;000]")), C("[010;000]"));
  EXPECT_THROW(permutation_element({0, 0}), SymplecticError);
}

TEST(Act, RejectsNonSymplectic) {
  const auto bad = SpMod2Element::from_matrix({{1, 1}, {0, 0}});
  EXPECT_FALSE(bad.is_symplectic());
  EXPECT_THROW(act(bad, C("[0;0]")), SymplecticError);
}

TEST(Act, PreservesParityExhaustively) {
  Rng rng(3);
  for (int g = 1; g <= 4; ++g) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto s = random_element(g, rng);
      ASSERT_TRUE(s.is_symplectic());
      for (const auto& m : enumerate(g)) ASSERT_EQ(act(s, m).parity(), m.parity());
    }
  }
}

TEST(Act, IsALeftAction) {
  Rng rng(5);
  for (int g = 1; g <= 4; ++g) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto s1 = random_element(g, rng);
      const auto s2 = random_element(g, rng);
      const auto m = random_characteristic(g, rng);
      EXPECT_EQ(act(s1 * s2, m), act(s1, act(s2, m)));
    }
  }
}

TEST(Generators, BlockConditionsHold) {
  for (int g = 1; g <= 5; ++g) {
    for (const auto& s : generators(GeneratorSet::Gg, g)) {
      // A D^t + B C^t = I and A B^t, C D^t symmetric, all mod 2.
      for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
          int adbc = 0;
          int ab_ij = 0;
          int ab_ji = 0;
          int cd_ij = 0;
          int cd_ji = 0;
          for (int k = 0; k < g; ++k) {
            adbc ^= (s.a(i, k) & s.d(j, k)) ^ (s.b(i, k) & s.c(j, k));
            ab_ij ^= s.a(i, k) & s.b(j, k);
            ab_ji ^= s.a(j, k) & s.b(i, k);
            cd_ij ^= s.c(i, k) & s.d(j, k);
            cd_ji ^= s.c(j, k) & s.d(i, k);
          }
          ASSERT_EQ(adbc, i == j ? 1 : 0);
          ASSERT_EQ(ab_ij, ab_ji);
          ASSERT_EQ(cd_ij, cd_ji);
        }
      }
    }
  }
}

TEST(Orbit, Examples) {
  const auto m = C("[101;011]");
  EXPECT_EQ(orbit(m, {SpMod2Element::identity(3)}), std::vector<Characteristic>{m});
  EXPECT_EQ(orbit(Characteristic::zero(2), generators(GeneratorSet::Stab, 2)).size(), 9U);
  EXPECT_EQ(orbit(Characteristic::zero(2), generators(GeneratorSet::Gg, 2)),
            enumerate(2, {Parity::Even, std::nullopt}));
  EXPECT_EQ(orbit(Characteristic::zero(3), generators(GeneratorSet::Gg, 3)).size(), 36U);
  EXPECT_EQ(orbit(Characteristic::zero(3), generators(GeneratorSet::Stab, 3)).size(), 27U);
  EXPECT_THROW(orbit(m, {}), SymplecticError);
}

TEST(Orbit, StabilizerOrbitsAreTheClasses) {
  for (int g = 1; g <= 5; ++g) {
    const auto gens = generators(GeneratorSet::Stab, g);
    for (int l = 0; l <= g; ++l) {
      const auto m = normal_form(g, l);
      EXPECT_EQ(orbit(m, gens), enumerate(g, {m.parity(), l})) << "g=" << g << " l=" << l;
    }
  }
}

TEST(VerifyTransitivity, MatchesFormulas) {
  for (int g = 1; g <= 6; ++g) {
    const auto r = verify_transitivity(g);
    EXPECT_TRUE(r.pass) << "g=" << g;
    EXPECT_EQ(r.even_orbit, (std::size_t{1} << (g - 1)) * ((std::size_t{1} << g) + 1));
    EXPECT_EQ(r.odd_orbit, (std::size_t{1} << (g - 1)) * ((std::size_t{1} << g) - 1));
  }
  EXPECT_EQ(verify_transitivity(3).even_orbit, 36U);
  EXPECT_EQ(verify_transitivity(3).odd_orbit, 28U);
}

TEST(GeneratorSet, ParsesNames) {
  EXPECT_EQ(parse_generator_set("gg"), GeneratorSet::Gg);
  EXPECT_EQ(parse_generator_set("Stab"), GeneratorSet::Stab);
  EXPECT_EQ(parse_generator_set("identity"), GeneratorSet::Identity);
  EXPECT_THROW(parse_generator_set("sp4"), SymplecticError);
}

}  // namespace
}  // namespace thetalab
