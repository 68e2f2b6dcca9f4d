#include <gtest/gtest.h>

#include <set>

#include "thetalab/chars.hpp"

namespace thetalab {
namespace {

Characteristic C(const char* text) { return Characteristic::parse(text); }

TEST(Characteristic, ParsesBothTextForms) {
  EXPECT_EQ(C("[110;110]"), C("eps:110 delta:110"));
  EXPECT_EQ(C("[110;101]").compact(), "[110;101]");
  EXPECT_EQ(C("[110;101]").verbose(), "eps:110 delta:101");
  EXPECT_EQ(C("[110;101]").eps_bit(0), 1);
  EXPECT_EQ(C("[110;101]").delta_bit(1), 0);
}

TEST(Characteristic, RejectsMalformedText) {
  EXPECT_THROW(C("[12;00]"), CharacteristicError);
  EXPECT_THROW(C("[10;0]"), CharacteristicError);
  EXPECT_THROW(C("110 110"), CharacteristicError);
  EXPECT_THROW(C("[;]"), CharacteristicError);
}

TEST(Parity, Examples) {
  EXPECT_EQ(parity(C("[1;1]")), Parity::Odd);
  EXPECT_EQ(parity(C("[1100;1100]")), Parity::Even);
  EXPECT_EQ(enumerate(3, {Parity::Even, std::nullopt}).size(), 36U);
}

TEST(ScalarClass, Examples) {
  EXPECT_EQ(scalar_class(C("[11000;11000]")), 2);
  EXPECT_EQ(scalar_class(C("[00000;00000]")), 0);
  EXPECT_EQ(scalar_class(C("[11100;11100]")), 3);
}

TEST(Enumerate, EvenClassTwoInGenusThree) {
  const auto got = enumerate(3, {Parity::Even, 2});
  const std::set<Characteristic> expected = {C("[110;110]"), C("[111;110]"), C("[110;111]"),
                                             C("[101;101]"), C("[111;101]"), C("[101;111]"),
                                             C("[011;011]"), C("[111;011]"), C("[011;111]")};
  EXPECT_EQ(std::set<Characteristic>(got.begin(), got.end()), expected);
  EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
}

TEST(Enumerate, SmallCases) {
  EXPECT_EQ(enumerate(2, {Parity::Even, std::nullopt}).size(), 10U);
  EXPECT_EQ(enumerate(1, {Parity::Odd, std::nullopt}), std::vector<Characteristic>{C("[1;1]")});
  EXPECT_THROW(enumerate(9), CharacteristicError);
}

TEST(Enumerate, CountsAndParityClassAgreement) {
  for (int g = 1; g <= 8; ++g) {
    const auto all = enumerate(g);
    ASSERT_EQ(all.size(), std::size_t{1} << (2 * g));
    std::size_t even = 0;
    for (const auto& m : all) {
      even += m.is_even() ? 1 : 0;
      ASSERT_EQ(m.is_even(), m.scalar_class() % 2 == 0) << m.compact();
    }
    EXPECT_EQ(even, (std::size_t{1} << (g - 1)) * ((std::size_t{1} << g) + 1)) << "g=" << g;
  }
}

TEST(Azygetic, Examples) {
  const auto fs = special_fundamental_system(2);
  EXPECT_TRUE(is_azygetic_triple(fs.odds[0], fs.odds[1], fs.evens[0]));
  const auto m = C("[110;110]");
  EXPECT_FALSE(is_azygetic_triple(m, m, m));
}

TEST(FundamentalSystem, GenusTwoMembers) {
  const auto fs = special_fundamental_system(2);
  EXPECT_EQ(fs.odds[0], C("[10;10]"));
  EXPECT_EQ(fs.odds[1], C("[01;11]"));
  EXPECT_EQ(fs.evens[0], C("[00;00]"));
  EXPECT_EQ(fs.evens[1], C("[10;00]"));
  EXPECT_EQ(fs.evens[3], C("[00;11]"));
}

TEST(FundamentalSystem, InvariantsUpToGenusFive) {
  for (int g = 1; g <= 5; ++g) {
    const auto fs = special_fundamental_system(g);
    EXPECT_EQ(fs.evens[0], Characteristic::zero(g));
    const auto members = fs.members();
    ASSERT_EQ(members.size(), static_cast<std::size_t>(2 * g + 2));
    Characteristic total = Characteristic::zero(g);
    for (const auto& m : members) total += m;
    EXPECT_EQ(total, Characteristic::zero(g));
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        for (std::size_t c = b + 1; c < members.size(); ++c) {
          EXPECT_TRUE(is_azygetic_triple(members[a], members[b], members[c])) << g << ":" << a << b << c;
        }
      }
      auto rest = members;
      rest.erase(rest.begin() + static_cast<long>(a));
      EXPECT_TRUE(is_essential_basis(rest)) << "g=" << g << " drop " << a;
    }
    for (int i = 0; i < g; ++i) EXPECT_FALSE(fs.odds[static_cast<std::size_t>(i)].is_even());
    for (const auto& e : fs.evens) EXPECT_TRUE(e.is_even());
  }
}

TEST(FundamentalSystem, EssentialBasisRejectsDuplicates) {
  auto basis = special_fundamental_system(3).basis();
  basis[1] = basis[0];
  EXPECT_FALSE(is_essential_basis(basis));
}

TEST(BChar, MatchesClosedForm) {
  EXPECT_EQ(b_char(special_fundamental_system(3)), C("[111;101]"));
  EXPECT_EQ(b_char(special_fundamental_system(2)), C("[11;01]"));
  for (int g = 1; g <= 8; ++g) {
    const auto fs = special_fundamental_system(g);
    std::uint32_t delta = 0;
    for (int a = 0; a < g; ++a) delta |= static_cast<std::uint32_t>((g - a) % 2) << a;
    EXPECT_EQ(b_char(fs), Characteristic(g, (1U << g) - 1, delta));
    Characteristic evens = Characteristic::zero(g);
    for (const auto& e : fs.evens) evens += e;
    EXPECT_EQ(evens, b_char(fs));
  }
}

TEST(Decompose, TrivialCases) {
  const auto fs = special_fundamental_system(4);
  EXPECT_EQ(decompose(Characteristic::zero(4), fs).size(), 0);
  const auto d = decompose(fs.odds[0], fs);
  EXPECT_EQ(d.indices(), std::vector<int>{0});
  EXPECT_EQ(fs.basis_label(0), "o1");
  EXPECT_EQ(fs.basis_label(4), "e2");
}

TEST(Decompose, BijectionOntoSmallSubsets) {
  for (int g = 1; g <= 6; ++g) {
    const auto fs = special_fundamental_system(g);
    const auto basis = fs.basis();
    std::set<std::uint64_t> seen;
    for (const auto& m : enumerate(g)) {
      const auto d = decompose(m, fs);
      ASSERT_LE(d.size(), g) << m.compact();
      Characteristic sum = Characteristic::zero(g);
      for (int i : d.indices()) sum += basis[static_cast<std::size_t>(i)];
      ASSERT_EQ(sum, m);
      ASSERT_TRUE(seen.insert(d.members).second) << "repeated subset for " << m.compact();
    }
  }
}

TEST(HyperellipticSet, SmallGenera) {
  EXPECT_TRUE(hyperelliptic_vanishing_set(2).empty());
  const auto b3 = b_char(special_fundamental_system(3));
  EXPECT_EQ(hyperelliptic_vanishing_set(3), std::vector<Characteristic>{b3});
  const auto e2 = enumerate(3, {Parity::Even, 2});
  EXPECT_NE(std::find(e2.begin(), e2.end(), b3), e2.end());
}

TEST(HyperellipticSet, InsideEStarAndParityRule) {
  for (int g = 2; g <= 6; ++g) {
    for (const auto& m : hyperelliptic_vanishing_set(g)) {
      EXPECT_TRUE(m.is_even());
      EXPECT_GE(m.scalar_class(), 2);
    }
    EXPECT_TRUE(vanish_lemma_check(g)) << "g=" << g;
  }
  // k summands shift b^g to an even characteristic iff k = g or g + 1 mod 4.
  for (int g = 1; g <= 6; ++g) {
    const auto fs = special_fundamental_system(g);
    const auto b = b_char(fs);
    for (const auto& m : enumerate(g)) {
      const int k = decompose(m, fs).size();
      EXPECT_EQ((m + b).parity(), predicted_shift_parity(k, g)) << m.compact();
    }
  }
}

TEST(TripleCharacteristic, SupportPattern) {
  for (int g = 3; g <= 6; ++g) {
    const auto fs = special_fundamental_system(g);
    for (int j1 = 0; j1 < g; ++j1) {
      for (int j2 = j1 + 1; j2 < g; ++j2) {
        for (int j3 = j2 + 1; j3 < g; ++j3) {
          const auto m = triple_characteristic(fs, j1, j2, j3);
          const std::uint32_t eps = (1U << j1) | (1U << j2) | (1U << j3);
          // delta bits i <= j1 appear three times, j1 < i <= j2 twice, j2 < i <= j3 once.
          const std::uint32_t delta = ((2U << j1) - 1) | (((2U << j3) - 1) & ~((2U << j2) - 1));
          EXPECT_EQ(m, Characteristic(g, eps, delta));
        }
      }
    }
  }
}

TEST(NormalForm, LeadingColumns) {
  EXPECT_EQ(normal_form(4, 2), C("[1100;1100]"));
  EXPECT_EQ(normal_form(3, 0), Characteristic::zero(3));
}

// m_I = o_1 + ... + o_5 equals b^5, and in higher genus it is b^g plus the
// remaining odd members.
TEST(FundamentalSystem, FirstFiveOddsDecomposition) {
  for (int g = 5; g <= 7; ++g) {
    const auto fs = special_fundamental_system(g);
    Characteristic m = Characteristic::zero(g);
    for (int j = 0; j < 5; ++j) m += fs.odds[static_cast<std::size_t>(j)];
    Characteristic rhs = b_char(fs);
    for (int j = 5; j < g; ++j) rhs += fs.odds[static_cast<std::size_t>(j)];
    EXPECT_EQ(m, rhs);
    if (g == 5) EXPECT_EQ(m, b_char(fs));
  }
}

}  // namespace
}  // namespace thetalab
