#include <random>

#include <gtest/gtest.h>

#include "gtop/codec.hpp"
#include "gtop/error.hpp"
#include "gtop/hensel.hpp"
#include "gtop/membership.hpp"
#include "gtop/setspec.hpp"
#include "oracles.hpp"

using namespace gtop;

namespace {

SetSpec ints(std::vector<std::int64_t> v) {
  std::vector<Element> es;
  for (auto x : v) {
    es.emplace_back(Int(x));
  }
  return SetSpec::finite(Group::integers(), es);
}

std::vector<Int> residues_of(const SetSpec& s) { return s.as<ResidueSet>()->residues; }

SequencePtr powers3() { return SequenceRegistry::global().get("powers3"); }

}  // namespace

TEST(Star, Examples) {
  StarSet r = star(SetSpec::residue(9, {0, 4, 5}));
  EXPECT_TRUE(r.closed());
  EXPECT_EQ(residues_of(r.base()), (std::vector<Int>{0, 4, 5}));

  StarSet f = star(ints({2}));
  EXPECT_EQ(f.enumerate(), (std::vector<Element>{Int(-2), Int(0), Int(2)}));

  StarSet iv = star(SetSpec::interval(1));
  EXPECT_TRUE(iv.closed());
  EXPECT_FALSE(iv.contains(Rational(1)));
  EXPECT_TRUE(iv.contains(Rational(0)));
}

TEST(Star, EmptySetIsIdentity) {
  StarSet e = star(SetSpec::empty(Group::integers()));
  EXPECT_TRUE(e.contains(Int(0)));
  EXPECT_FALSE(e.contains(Int(1)));
}

TEST(Sumset, Examples) {
  SetSpec s = sumset(SetSpec::residue(9, {0, 4, 5}), SetSpec::residue(9, {0, 4, 5}));
  EXPECT_EQ(residues_of(s), (std::vector<Int>{0, 1, 4, 5, 8}));

  SetSpec iv = sumset(SetSpec::interval(1), SetSpec::interval(Rational(1, 4)));
  EXPECT_EQ(iv.as<SymmetricInterval>()->epsilon, Rational(5, 4));

  SetSpec mixed = sumset(SetSpec::residue(9, {4}), SetSpec::residue(27, {13}));
  EXPECT_EQ(mixed.as<ResidueSet>()->modulus, Int(9));
  EXPECT_EQ(residues_of(mixed), (std::vector<Int>{8}));
}

TEST(Sumset, UnsupportedPairThrows) {
  SetSpec t = SetSpec::tail(powers3(), 0);
  EXPECT_THROW(sumset(t, ints({1})), UnsupportedOperation);
}

TEST(Contains, Examples) {
  EXPECT_TRUE(SetSpec::residue(9, {0, 4, 5}).contains(Int(13)));
  EXPECT_FALSE(SetSpec::interval(1).contains(Rational(1)));
  EXPECT_TRUE(star(SetSpec::tail(powers3(), 2)).contains(Int(-27)));
  EXPECT_FALSE(star(SetSpec::tail(powers3(), 2)).contains(Int(-3)));
  EXPECT_FALSE(SetSpec::tail(powers3(), 2).contains(Int(28)));
}

TEST(NFoldStar, Examples) {
  SetSpec r = SetSpec::residue(9, {0, 4, 5});
  EXPECT_EQ(residues_of(n_fold_star(r, 1)), residues_of(star(r).base()));
  EXPECT_EQ(residues_of(n_fold_star(r, 2)), (std::vector<Int>{0, 1, 4, 5, 8}));
  SetSpec three = n_fold_star(ints({1}), 3);
  EXPECT_EQ(three.as<FiniteSet>()->elements.size(), 7u);
  for (int x = -3; x <= 3; ++x) {
    EXPECT_TRUE(three.contains(Int(x)));
  }
}

TEST(PrefixSum, Examples) {
  SetSpec s2 = sqrt7_set(2);
  Membership zero = prefix_sum_membership(Int(0), {s2, s2, sqrt7_set(3)});
  ASSERT_EQ(zero.truth, Truth::yes);
  for (const auto& x : zero.witness->summands) {
    EXPECT_EQ(x, Element(Int(0)));
  }

  Membership two = prefix_sum_membership(Int(1), {s2, s2});
  ASSERT_EQ(two.truth, Truth::yes);
  EXPECT_TRUE(recheck(*two.witness));

  EXPECT_EQ(prefix_sum_membership(Int(1), {s2}).truth, Truth::no);
}

TEST(PrefixSum, TailCarryDecisions) {
  SequencePtr p = powers3();
  // 5 = 9 - 3 - 1 needs three nonzero summands.
  SetSpec t0 = SetSpec::tail(p, 0);
  EXPECT_EQ(prefix_sum_membership(Int(5), {t0, t0}).truth, Truth::no);
  Membership m = prefix_sum_membership(Int(5), {t0, t0, t0});
  ASSERT_EQ(m.truth, Truth::yes);
  EXPECT_TRUE(recheck(*m.witness));
  EXPECT_EQ(prefix_sum_membership(Int(5), {t0, SetSpec::tail(p, 2)}).truth, Truth::no);
}

TEST(PrefixSum, UnboundedSequenceWithoutCertificateIsNeverNo) {
  // Fibonacci numbers carry no growth certificate; a "no" would need one.
  SetSpec t = SetSpec::tail(SequenceRegistry::global().get("fibonacci"), 3);
  Membership m = prefix_sum_membership(Int(4), {t});
  EXPECT_NE(m.truth, Truth::no);
}

TEST(SetspecProperties, StarIdempotentAndSymmetric) {
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::int64_t> v;
    for (int i = 0, n = static_cast<int>(rng() % 6); i < n; ++i) {
      v.push_back(static_cast<std::int64_t>(rng() % 41) - 20);
    }
    SetSpec s = ints(v);
    StarSet once = star(s);
    StarSet twice = star(once.base());
    std::int64_t m = static_cast<std::int64_t>(rng() % 12) + 1;
    std::vector<Int> rs;
    for (std::int64_t r = 0; r < m; ++r) {
      if (rng() % 3 == 0) {
        rs.push_back(r);
      }
    }
    SetSpec res = SetSpec::residue(m, rs);
    StarSet rstar = star(res);
    for (std::int64_t g = -25; g <= 25; ++g) {
      EXPECT_EQ(once.contains(Int(g)), twice.contains(Int(g)));
      EXPECT_EQ(once.contains(Int(g)), once.contains(Int(-g)));
      EXPECT_EQ(rstar.contains(Int(g)), rstar.contains(Int(-g)));
      EXPECT_EQ(rstar.contains(Int(g)), star(rstar.base()).contains(Int(g)));
    }
  }
}

TEST(SetspecProperties, FiniteSumsetMatchesBruteForce) {
  std::mt19937 rng(5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::int64_t> a, b;
    for (int i = 0, n = static_cast<int>(rng() % 21); i < n; ++i) {
      a.push_back(static_cast<std::int64_t>(rng() % 101) - 50);
    }
    for (int i = 0, n = static_cast<int>(rng() % 21); i < n; ++i) {
      b.push_back(static_cast<std::int64_t>(rng() % 101) - 50);
    }
    SetSpec s = sumset(ints(a), ints(b));
    std::set<std::int64_t> expect = oracle::pairwise_sums(a, b);
    const auto& got = s.as<FiniteSet>()->elements;
    ASSERT_EQ(got.size(), expect.size());
    auto it = expect.begin();
    for (const auto& e : got) {
      EXPECT_EQ(std::get<Int>(e), Int(*it++));
    }
  }
}

TEST(SetspecProperties, ResidueSumsetLaw) {
  std::mt19937 rng(9);
  for (int t = 0; t < 60; ++t) {
    std::int64_t m1 = static_cast<std::int64_t>(rng() % 30) + 1;
    std::int64_t m2 = static_cast<std::int64_t>(rng() % 30) + 1;
    std::int64_t a = static_cast<std::int64_t>(rng() % m1);
    std::int64_t b = static_cast<std::int64_t>(rng() % m2);
    SetSpec s = sumset(SetSpec::residue(m1, {a}), SetSpec::residue(m2, {b}));
    std::int64_t g = std::gcd(m1, m2);
    EXPECT_EQ(s.as<ResidueSet>()->modulus, Int(g));
    // Sample representatives of each class and check every sum lands in the result.
    for (int i = 0; i < 100; ++i) {
      std::int64_t x = a + m1 * (static_cast<std::int64_t>(rng() % 201) - 100);
      std::int64_t y = b + m2 * (static_cast<std::int64_t>(rng() % 201) - 100);
      EXPECT_TRUE(s.contains(Int(x + y)));
    }
    // And the result holds nothing else: every member of the class is reached.
    for (std::int64_t z = -60; z <= 60; ++z) {
      bool member = oracle::mod(z - a - b, g) == 0;
      EXPECT_EQ(s.contains(Int(z)), member);
    }
  }
}

TEST(SetspecProperties, MembershipMonotoneAndWitnessesRecheck) {
  std::mt19937 rng(13);
  int checked = 0;
  for (int t = 0; t < 600; ++t) {
    std::vector<SetSpec> chain;
    int len = static_cast<int>(rng() % 3) + 1;
    for (int i = 0; i < len; ++i) {
      switch (rng() % 3) {
        case 0: {
          std::vector<std::int64_t> v;
          for (int k = 0, n = static_cast<int>(rng() % 4) + 1; k < n; ++k) {
            v.push_back(static_cast<std::int64_t>(rng() % 31) - 15);
          }
          chain.push_back(ints(v));
          break;
        }
        case 1:
          chain.push_back(sqrt7_set(static_cast<unsigned>(rng() % 3) + 1));
          break;
        default:
          chain.push_back(SetSpec::tail(powers3(), rng() % 3));
      }
    }
    Int g = static_cast<std::int64_t>(rng() % 61) - 30;
    Membership m = prefix_sum_membership(g, chain);
    if (m.truth == Truth::yes) {
      ASSERT_TRUE(m.witness.has_value());
      EXPECT_TRUE(recheck(*m.witness));
      auto longer = chain;
      longer.push_back(ints({static_cast<std::int64_t>(rng() % 7)}));
      EXPECT_EQ(prefix_sum_membership(g, longer).truth, Truth::yes);
      ++checked;
    }
    // An exact "no" agrees with brute force over the finite sets in range.
    if (m.truth == Truth::no) {
      bool all_finite = std::all_of(chain.begin(), chain.end(), [](const SetSpec& s) { return s.as<FiniteSet>(); });
      if (all_finite) {
        std::vector<std::vector<std::int64_t>> cand;
        for (const auto& s : chain) {
          std::vector<std::int64_t> c;
          for (const auto& e : star(s).enumerate()) {
            c.push_back(std::get<Int>(e).to_int64());
          }
          cand.push_back(c);
        }
        EXPECT_FALSE(oracle::decomposes(g.to_int64(), cand));
      }
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(SetspecJson, RoundTrip) {
  std::vector<SetSpec> specs{SetSpec::residue(9, {0, 4, 5}), ints({-3, 7}), SetSpec::box(4, {{0}, {0, 1}, {0, 1, 2}}),
                             SetSpec::interval(Rational(3, 8)), SetSpec::tail(powers3(), 2, {4, 5})};
  for (const auto& s : specs) {
    json j = setspec_to_json(s);
    SetSpec back = setspec_from_json(j);
    EXPECT_EQ(setspec_to_json(back), j) << j.dump();
  }
  json r = json::parse(R"({"kind": "residue", "modulus": 9, "residues": [0,4,5]})");
  EXPECT_TRUE(setspec_from_json(r).contains(Int(13)));
}

TEST(SetspecJson, MalformedReportsLocation) {
  json bad = json::parse(R"({"kind": "residue", "modulus": 9})");
  try {
    setspec_from_json(bad, nullptr, "config.set");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("config.set"), std::string::npos);
  }
}

TEST(BoxSet, RejectsAsymmetricCoordinates) {
  EXPECT_THROW(SetSpec::box(3, {{0}, {0, 1}, {0, 1}}), PreconditionError);
  EXPECT_THROW(SetSpec::box(2, {{0}, {1}}), PreconditionError);
}

TEST(Sequences, BuiltinsAndPrefixes) {
  auto& reg = SequenceRegistry::global();
  EXPECT_EQ(reg.get("powers3")->term(4), Int(81));
  EXPECT_EQ(reg.get("factorials")->term(3), Int(24));
  EXPECT_EQ(reg.get("fibonacci")->term(4), Int(8));
  SequencePtr pre = make_prefix("test-prefix", {1, 3, 9, 27}, 0);
  EXPECT_TRUE(pre->divisibility_chain());
  EXPECT_THROW(pre->term(4), BudgetExceeded);
  EXPECT_THROW(make_prefix("bad", {1, 3, 5}, 0), PreconditionError);
}
