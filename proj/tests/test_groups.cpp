#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gtop/codec.hpp"
#include "gtop/error.hpp"
#include "gtop/group.hpp"
#include "oracles.hpp"

using namespace gtop;

namespace {

Group d4() { return load_cayley_file(std::string(GTOP_TEST_DATA) + "/d4.json"); }

Element w(const Group& g, const char* text) { return g.parse(text); }

}  // namespace

TEST(Int, SmallAndBigArithmeticAgree) {
  Int big = pow(Int(3), 60);
  EXPECT_FALSE(big.is_small());
  EXPECT_EQ(big.str(), "42391158275216203514294433201");
  Int x = big + Int(1) - big;
  EXPECT_EQ(x, Int(1));
  EXPECT_TRUE(x.is_small());
  Int near = Int(std::numeric_limits<std::int64_t>::max());
  EXPECT_EQ((near + Int(1)).str(), "9223372036854775808");
  EXPECT_EQ((near * near).str().size(), 38u);
}

TEST(Int, ModAndInverse) {
  EXPECT_EQ(mod(Int(-4), Int(9)), Int(5));
  EXPECT_EQ(*inverse_mod(Int(4), Int(9)), Int(7));
  EXPECT_FALSE(inverse_mod(Int(3), Int(9)).has_value());
  EXPECT_EQ(gcd(Int(27), Int(-9)), Int(9));
  EXPECT_TRUE(is_probable_prime(Int(3)));
  EXPECT_FALSE(is_probable_prime(Int(9)));
}

TEST(Groups, AddExamples) {
  Group z = Group::integers();
  EXPECT_EQ(z.add(Int(3), Int(4)), Element(Int(7)));

  Group f = Group::free({"x", "y"});
  EXPECT_EQ(f.format(f.add(w(f, "x*y^-1"), w(f, "y*x"))), "x*x");

  Group p = Group::product_mod(3);
  Element a = ResidueVector{{0, 1, 2}};
  EXPECT_EQ(p.add(a, a), Element(ResidueVector{{0, 0, 1}}));
}

TEST(Groups, NegExamples) {
  Group z = Group::integers();
  EXPECT_EQ(z.neg(Int(5)), Element(Int(-5)));
  Group f = Group::free({"x", "y"});
  EXPECT_EQ(f.neg(w(f, "x*y")), w(f, "y^-1*x^-1"));
  Group d = d4();
  EXPECT_EQ(d.neg(d.identity()), d.identity());
}

TEST(Groups, ConjugateExamples) {
  Group f = Group::free({"x", "y"});
  EXPECT_EQ(f.conjugate(w(f, "x"), w(f, "y")), w(f, "x*y*x^-1"));
  EXPECT_EQ(f.conjugate(w(f, "x"), w(f, "x^2")), w(f, "x^2"));
  Group z = Group::integers();
  EXPECT_EQ(z.conjugate(Int(7), Int(3)), Element(Int(3)));
}

TEST(Groups, MismatchedGroupsThrow) {
  Group z = Group::integers();
  Group f = Group::free({"x"});
  EXPECT_THROW(z.add(Int(1), f.identity()), GroupMismatch);
  EXPECT_THROW(Group::product_mod(3).check(ResidueVector{{0, 1}}), GroupMismatch);
  EXPECT_THROW(Group::product_mod(3).check(ResidueVector{{0, 2, 0}}), GroupMismatch);
}

TEST(Cayley, LoadExamples) {
  Group z2 = load_cayley(json{{"order", 2}, {"table", {{0, 1}, {1, 0}}}});
  EXPECT_EQ(z2.elements().size(), 2u);
  Group d = d4();
  EXPECT_EQ(d.elements().size(), 8u);
  EXPECT_FALSE(d.is_abelian());
  EXPECT_THROW(load_cayley(json{{"order", 2}, {"table", {{0, 1}, {0, 1}}}}), InvalidGroupTable);
  EXPECT_THROW(load_cayley(json{{"table", {{0, 1, 2}, {1, 2, 0}, {2, 1, 0}}}}), InvalidGroupTable);
}

TEST(Cayley, FixtureMatchesSquareSymmetries) {
  Group d = d4();
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) {
      Element p = d.add(CayleyIndex{static_cast<std::uint32_t>(x)}, CayleyIndex{static_cast<std::uint32_t>(y)});
      EXPECT_EQ(std::get<CayleyIndex>(p).value, static_cast<std::uint32_t>(oracle::D4::multiply(x, y)));
    }
  }
}

TEST(GroupLaws, ExhaustiveOnD4) {
  Group d = d4();
  auto es = d.elements();
  for (const auto& a : es) {
    EXPECT_EQ(d.add(a, d.identity()), a);
    EXPECT_TRUE(d.is_identity(d.add(a, d.neg(a))));
    for (const auto& b : es) {
      for (const auto& c : es) {
        EXPECT_EQ(d.add(d.add(a, b), c), d.add(a, d.add(b, c)));
      }
      for (const auto& c : es) {
        EXPECT_EQ(d.conjugate(a, d.add(b, c)), d.add(d.conjugate(a, b), d.conjugate(a, c)));
      }
    }
  }
}

TEST(GroupLaws, RandomizedFreeAndProduct) {
  std::mt19937 rng(7);
  Group f = Group::free({"x", "y", "z"});
  auto random_word = [&] {
    std::vector<int> letters;
    int n = static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      int l = static_cast<int>(rng() % 3) + 1;
      letters.push_back(rng() % 2 ? l : -l);
    }
    return Element(reduce(letters));
  };
  for (int t = 0; t < 300; ++t) {
    Element a = random_word(), b = random_word(), c = random_word();
    EXPECT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
    EXPECT_TRUE(f.is_identity(f.add(a, f.neg(a))));
    EXPECT_EQ(f.conjugate(a, f.add(b, c)), f.add(f.conjugate(a, b), f.conjugate(a, c)));
    const auto& wa = std::get<Word>(a).letters;
    for (std::size_t i = 1; i < wa.size(); ++i) {
      EXPECT_NE(wa[i], -wa[i - 1]);
    }
  }
  Group p = Group::product_mod(6);
  auto es = p.elements();
  for (int t = 0; t < 300; ++t) {
    const auto& a = es[rng() % es.size()];
    const auto& b = es[rng() % es.size()];
    const auto& c = es[rng() % es.size()];
    EXPECT_EQ(p.add(p.add(a, b), c), p.add(a, p.add(b, c)));
    EXPECT_TRUE(p.is_identity(p.add(a, p.neg(a))));
  }
}

TEST(FreeReduction, ConfluentAcrossGroupings) {
  std::mt19937 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::vector<int>> parts(4);
    for (auto& part : parts) {
      int n = static_cast<int>(rng() % 5);
      for (int i = 0; i < n; ++i) {
        int l = static_cast<int>(rng() % 2) + 1;
        part.push_back(rng() % 2 ? l : -l);
      }
    }
    std::vector<int> all;
    for (const auto& part : parts) {
      all.insert(all.end(), part.begin(), part.end());
    }
    Word flat = reduce(all);
    // Reduce the halves first, then the concatenation.
    std::vector<int> left = reduce({parts[0].begin(), parts[0].end()}).letters;
    std::vector<int> mid = parts[1];
    mid.insert(mid.end(), parts[2].begin(), parts[2].end());
    auto rm = reduce(mid).letters;
    left.insert(left.end(), rm.begin(), rm.end());
    left.insert(left.end(), parts[3].begin(), parts[3].end());
    EXPECT_EQ(reduce(left), flat);
  }
}

TEST(Groups, FormatParseRoundTrip) {
  Group f = Group::free({"x", "y"});
  EXPECT_EQ(f.format(f.identity()), "e");
  EXPECT_EQ(f.format(w(f, "x*y^-1*y*x")), "x*x");
  Group q = Group::rationals();
  EXPECT_EQ(q.format(q.parse("6/8")), "3/4");
  Group d = d4();
  EXPECT_EQ(d.format(d.parse("r2s")), "r2s");
}
