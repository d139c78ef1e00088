#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "mwb/counting.hpp"
#include "mwb/thread.hpp"

using namespace mwb;

TEST_CASE("scaled counts stay exact") {
  SUBCASE("normal form: odd mantissa times a power of two") {
    const Count c(BigInt(12));
    CHECK(c.mantissa() == 3);
    CHECK(c.shift() == 2);
    CHECK(c.value() == 12);
    CHECK(c.str() == "12");

    const Count zero;
    CHECK(zero.is_zero());
    CHECK(zero.mantissa() == 0);
    CHECK(zero.shift() == 0);
    CHECK(zero.bit_length() == 0);
    CHECK(Count(7).mantissa() == 7);
    CHECK(Count(7).shift() == 0);
  }
  SUBCASE("bit lengths") {
    CHECK(Count(1).bit_length() == 1);
    CHECK(Count(12).bit_length() == 4);
    CHECK(Count::pow2(10).bit_length() == 11);
    CHECK(Count::pow2(BigInt(1) << 50).bit_length() == (BigInt(1) << 50) + 1);
  }
  SUBCASE("sums") {
    CHECK(Count(3) + Count(9) == Count(12));
    CHECK(Count(0) + Count(5) == Count(5));
    CHECK(Count::pow2(3) + Count::pow2(3) == Count::pow2(4));
    // Aligning 2^(2^30) with 1 would need a mantissa of 2^30 bits.
    CHECK_THROWS_AS(Count::pow2(BigInt(1) << 30) + Count(1), Error);
  }
  SUBCASE("products and powers never materialize the shift") {
    const BigInt big = BigInt(1) << 40;
    CHECK(Count::pow2(big) * Count::pow2(big) == Count::pow2(big * 2));
    CHECK(Count(6) * Count(10) == Count(60));
    CHECK(Count(3).pow(4) == Count(81));
    CHECK(Count(7).pow(0) == Count(1));
    CHECK(Count(2).pow(100) == Count::pow2(100));
    CHECK(Count(12).pow(2) == Count(144));
    // 3^(2^25) would have ~2^26.6 bits of mantissa: beyond the power cap.
    CHECK_THROWS_AS(Count(3).pow(1ull << 25), Error);
  }
  SUBCASE("comparisons") {
    CHECK(Count::pow2(100) < Count::pow2(101));
    CHECK(Count(5) * Count::pow2(10) < Count::pow2(13));  // 5120 < 8192
    CHECK(Count::pow2(13) > Count(5) * Count::pow2(10));
    CHECK(Count(5) * Count::pow2(10) > Count::pow2(12));  // 5120 > 4096
    CHECK(Count(0) < Count(1));
    CHECK(Count(4) == Count(4));
    CHECK(Count::pow2(BigInt(1) << 60) < Count::pow2((BigInt(1) << 60) + 1));
    // Equal bit lengths, different mantissas.
    CHECK(Count(5) * Count::pow2(10) < Count(7) * Count::pow2(10));
  }
  SUBCASE("value() guards against materializing towers") {
    CHECK(Count::pow2(20).value() == 1ull << 20);
    CHECK_THROWS_AS(Count::pow2((BigInt(1) << 22) + 5).value(), Error);
  }
  SUBCASE("printing") {
    CHECK(Count(0).str() == "0");
    CHECK(Count(1).str() == "1");
    CHECK(Count::pow2(64).str() == std::string("18446744073709551616"));
    CHECK(Count::pow2(10000).str() == "2^10000");
    CHECK((Count(3) * Count::pow2(10000)).str() == "3*2^10000");
  }
}

TEST_CASE("state counts") {
  CHECK(state_count(0) == Count(1));
  CHECK(state_count(10) == Count(1024));
  CHECK(state_count(200) == Count::pow2(200));
}

TEST_CASE("the counting inequality") {
  SUBCASE("frozen small values") {
    CHECK(reachable_transformation_bound(2) == Count(64));    // 2^(1*4+2)
    CHECK(all_transformations(2) == Count(256));              // 2^(2*4)
    CHECK(reachable_transformation_bound(4) == Count::pow2(36));
    CHECK(all_transformations(4) == Count::pow2(64));
  }
  SUBCASE("the exact comparison and the symbolic form agree") {
    for (std::uint64_t ems = 2; ems <= 32; ems += 2) {
      const bool exact =
          reachable_transformation_bound(ems) < all_transformations(ems);
      CHECK(exact == counting_inequality_holds(ems));
      CHECK(exact);
    }
  }
  SUBCASE("the symbolic form handles rationals and the boundary") {
    CHECK_FALSE(counting_inequality_holds(1));     // ems = 1 is the equality
    CHECK_FALSE(counting_inequality_holds(2, 2));  // boundary, rationally
    CHECK_FALSE(counting_inequality_holds(1, 2));
    CHECK(counting_inequality_holds(3, 2));
    CHECK(counting_inequality_holds(3));
    CHECK_THROWS_AS(counting_inequality_holds(0), Error);
    CHECK_THROWS_AS(counting_inequality_holds(1, 0), Error);
  }
  SUBCASE("the exact sides need an even positive ems") {
    CHECK_THROWS_AS(reachable_transformation_bound(3), Error);
    CHECK_THROWS_AS(reachable_transformation_bound(0), Error);
    CHECK_THROWS_AS(all_transformations(5), Error);
  }
  SUBCASE("towers never materialize") {
    // ems = 64: both sides are 2^(huge); comparing them stays cheap.
    CHECK(reachable_transformation_bound(64) < all_transformations(64));
  }
}

TEST_CASE("the thread-count bound") {
  CHECK(thread_count_bound(1, 2, 2) == Count(196));  // ((1+2)*4+2)^2
  CHECK(thread_count_bound(5, 2, 8) ==
        Count(BigInt("1681512539062500000000")));     // 450^8
  CHECK(thread_count_bound(3, 1, 1) == Count(6));     // (d+w+2)^1
  CHECK_THROWS_AS(thread_count_bound(0, 1, 1), Error);
  CHECK_THROWS_AS(thread_count_bound(1, 0, 1), Error);
  CHECK_THROWS_AS(thread_count_bound(1, 1, 0), Error);
}

TEST_CASE("exact thread counts by enumeration") {
  CHECK(exact_thread_count(0, 3) == Count(2));  // S and D only
  CHECK(exact_thread_count(1, 1) == Count(3));
  CHECK(exact_thread_count(1, 2) == Count(9));

  SUBCASE("the bound really bounds the exact count") {
    // alphabet of size 3 = d + w with d = 1, w = 2; budget e = 2.
    const Count exact = exact_thread_count(3, 2);
    CHECK(exact <= thread_count_bound(1, 2, 2));
    CHECK(exact > Count(9));
  }
  SUBCASE("the cap guards the enumeration") {
    CHECK_THROWS_AS(exact_thread_count(2, 4, 1000), StateSpaceTooLarge);
  }
  SUBCASE("enumeration agrees with enumerate_threads") {
    std::vector<ActionId> alphabet = {ActionId("a0"), ActionId("a1")};
    CHECK(exact_thread_count(2, 2) ==
          Count(enumerate_threads(alphabet, 2).size()));
  }
}

TEST_CASE("regime parameter validation") {
  RegimeParams p{.k = 1, .l = 1, .m = 4, .d = 5, .e = 8, .f = false};
  CHECK_NOTHROW(p.validate());
  CHECK(p.w() == 2);
  CHECK(p.dms() == 2);
  CHECK(p.ems() == 1);

  RegimeParams bad = p;
  bad.l = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.l = 33;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.k = 21;
  CHECK_THROWS_AS(bad.validate(), Error);
  // k = 0 is fine on its own; only the external-half clause needs k >= 1.
  bad = p;
  bad.k = 0;
  CHECK_NOTHROW(bad.validate());
  bad.f = true;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.d = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.e = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = p;
  bad.u = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("regime classification") {
  SUBCASE("the mirror point is certified complete") {
    const RegimeVerdict v = classify_regime(
        {.k = 1, .l = 1, .m = 4, .d = 5, .e = 8, .f = false});
    CHECK(v.regime == Regime::complete_mirror_ou);
    CHECK(v.complete());
    CHECK(v.to_text().find("verdict: complete_mirror_ou") !=
          std::string::npos);
    CHECK_FALSE(v.checklist.empty());
  }
  SUBCASE("the register-file point is certified complete") {
    const RegimeVerdict v = classify_regime({.k = 1, .l = 1, .m = 2, .d = 5,
                                             .e = 9, .f = true, .u = 2,
                                             .v = 1});
    CHECK(v.regime == Regime::complete_register_file);
    CHECK(v.complete());
  }
  SUBCASE("a register-file shape with the wrong register counts is not") {
    const RegimeVerdict v = classify_regime({.k = 1, .l = 1, .m = 2, .d = 5,
                                             .e = 9, .f = true, .u = 1,
                                             .v = 1});
    CHECK(v.regime == Regime::unknown);
  }
  SUBCASE("a starved budget point is certified incomplete") {
    const RegimeVerdict v = classify_regime(
        {.k = 3, .l = 2, .m = 2, .d = 1, .e = 2, .f = true});
    CHECK(v.regime == Regime::incomplete_budget);
    CHECK_FALSE(v.complete());
    CHECK(v.to_text().find("incomplete_budget") != std::string::npos);
  }
  SUBCASE("a counting point is certified incomplete") {
    const RegimeVerdict v = classify_regime(
        {.k = 2, .l = 8, .m = 1, .d = 4, .e = 2, .f = true});
    CHECK(v.regime == Regime::incomplete_counting);
  }
  SUBCASE("between the certified regimes the verdict stays open") {
    const RegimeVerdict v = classify_regime(
        {.k = 2, .l = 1, .m = 3, .d = 7, .e = 100, .f = true});
    CHECK(v.regime == Regime::unknown);
    CHECK_FALSE(v.complete());
    // Every rule left at least one failed premise in the checklist.
    bool any_failed = false;
    for (const PremiseCheck& c : v.checklist) {
      if (!c.holds) any_failed = true;
    }
    CHECK(any_failed);
  }
  SUBCASE("the incomplete rules need the external-half clause") {
    const RegimeVerdict v = classify_regime(
        {.k = 3, .l = 2, .m = 2, .d = 1, .e = 2, .f = false});
    CHECK(v.regime == Regime::unknown);
  }
  SUBCASE("incomplete premises fail on every certified-complete point") {
    // No parameter point may look complete to one rule and incomplete to
    // another: on complete points each incomplete rule must have some
    // premise failing.
    int complete_points = 0;
    for (std::uint32_t k = 0; k <= 3; ++k) {
      for (std::uint32_t l = 1; l <= 2; ++l) {
        for (int f = 0; f <= 1; ++f) {
          if (f == 1 && k < 1) continue;
          RegimeParams p{.k = k, .l = l, .m = 0, .d = 5,
                         .e = 8, .f = f == 1};
          p.m = static_cast<std::uint32_t>(p.dms() + k + 1);
          const RegimeVerdict v = classify_regime(p);
          if (!v.complete()) continue;
          ++complete_points;
          for (const char* rule : {"instruction and state budgets",
                                   "operating unit counting"}) {
            bool rule_failed = false;
            for (const PremiseCheck& c : v.checklist) {
              if (c.rule == rule && !c.holds) rule_failed = true;
            }
            CHECK(rule_failed);
          }
        }
      }
    }
    CHECK(complete_points > 0);
  }
  SUBCASE("huge thread bounds fall out of the counting premise safely") {
    // d and e so large the bound cannot be expanded: the premise must be
    // reported false rather than erroring out.
    const RegimeVerdict v = classify_regime(
        {.k = 4, .l = 4, .m = 1, .d = 4, .e = 1ull << 40, .f = true});
    CHECK(v.regime == Regime::unknown);
  }
}

TEST_CASE("the thread-count chain") {
  SUBCASE("a point where every link carries") {
    const ChainReport r = thread_count_chain(3, 2, 1, 2, 2);
    CHECK(r.lower == Count(196));
    CHECK(r.middle == Count(256));
    CHECK(r.budget == Count(256));  // 2^(2^2 * 2)
    CHECK(r.strict_link);
    CHECK(r.budget_link);
    CHECK(r.side_l_wide_enough);   // l = 2 >= 2k-4 = 2
    CHECK(r.side_l_at_least_2);
    CHECK(r.holds());
    CHECK(r.to_text().find("chain holds") != std::string::npos);
  }
  SUBCASE("a point where the budget link snaps") {
    const ChainReport r = thread_count_chain(3, 2, 5, 2, 2);
    CHECK(r.lower == Count(900));    // (7*4+2)^2
    CHECK(r.middle == Count(1024));  // (7*4+4)^2
    CHECK(r.budget == Count(256));
    CHECK(r.strict_link);
    CHECK_FALSE(r.budget_link);
    CHECK_FALSE(r.holds());
    CHECK(r.to_text().find("chain broken") != std::string::npos);
  }
  SUBCASE("side conditions are reported, not enforced") {
    const ChainReport r = thread_count_chain(4, 1, 1, 2, 2);
    CHECK_FALSE(r.side_l_wide_enough);  // l = 1 < 2k-4 = 4
    CHECK_FALSE(r.side_l_at_least_2);
  }
  SUBCASE("parameter ranges") {
    CHECK_THROWS_AS(thread_count_chain(0, 1, 1, 1, 1), Error);
    CHECK_THROWS_AS(thread_count_chain(1, 0, 1, 1, 1), Error);
    CHECK_THROWS_AS(thread_count_chain(1, 1, 0, 1, 1), Error);
  }
}
