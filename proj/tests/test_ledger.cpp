#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fedsim/ledger.hpp"

using fedsim::CommunityId;
using fedsim::MetricsLedger;
using fedsim::PairCell;
using fedsim::PairKey;
using fedsim::PersonId;
using fedsim::Rational;

namespace {
constexpr PersonId kAlice{0};
constexpr CommunityId kX{3}, kY{4};
}  // namespace

TEST_CASE("pair keys order by community, kind, then entity") {
  const PairKey person_y = fedsim::person_pair(kAlice, kY);
  const PairKey child_y = fedsim::child_pair(kX, kY);
  const PairKey person_x = fedsim::person_pair(kAlice, kX);
  CHECK(person_x < person_y);          // community first
  CHECK(person_y < child_y);           // persons sort before children
  CHECK(person_y == fedsim::person_pair(kAlice, kY));
  CHECK_FALSE(person_y == child_y);
}

TEST_CASE("integrals accumulate piecewise-constant values") {
  MetricsLedger ledger;
  const PairKey key = fedsim::person_pair(kAlice, kY);

  PairCell& c = ledger.cell(key, 3);
  CHECK(c.last == 3);
  CHECK(c.seat_integral == Rational(0));

  // Seated with share 2/3 over [3, 10), then unseated over [10, 16).
  c.seat_value = 1;
  c.share_value = Rational(2, 3);
  c.active = true;
  MetricsLedger::bring(c, 10);
  c.seat_value = 0;

  CHECK(ledger.seat_integral_at(key, 10) == Rational(7));
  CHECK(ledger.share_integral_at(key, 10) == Rational(14, 3));
  CHECK(ledger.seat_integral_at(key, 16) == Rational(7));
  CHECK(ledger.share_integral_at(key, 16) == Rational(14, 3) + Rational(4));

  // Projections never mutate the cell.
  CHECK(ledger.find(key)->last == 10);

  // ratio at t=16: 7 / (14/3 + 4) = 21/26.
  CHECK(ledger.ratio_at(key, 16) == Rational(21, 26));
}

TEST_CASE("ratio defaults to one while the share integral is zero") {
  MetricsLedger ledger;
  const PairKey key = fedsim::person_pair(kAlice, kY);
  CHECK(ledger.ratio_at(key, 5) == Rational(1));  // unknown pair
  ledger.cell(key, 5);                            // created, nothing accrued
  CHECK(ledger.ratio_at(key, 5) == Rational(1));
  CHECK(ledger.ratio_at(key, 9) == Rational(1));  // share value still zero
}

TEST_CASE("inactive cells stop accruing") {
  MetricsLedger ledger;
  const PairKey key = fedsim::child_pair(kX, kY);
  PairCell& c = ledger.cell(key, 0);
  c.seat_value = 2;
  c.share_value = Rational(4, 3);
  c.active = true;
  MetricsLedger::bring(c, 6);
  c.seat_value = 0;
  c.share_value = Rational(0);
  c.active = false;

  ledger.finalize(20);
  const PairCell* done = ledger.find(key);
  REQUIRE(done != nullptr);
  CHECK(done->last == 20);
  CHECK(done->seat_integral == Rational(12));
  CHECK(done->share_integral == Rational(8));
}

TEST_CASE("finalize brings every cell to the horizon") {
  MetricsLedger ledger;
  PairCell& a = ledger.cell(fedsim::person_pair(kAlice, kX), 0);
  a.seat_value = 1;
  a.share_value = Rational(1);
  a.active = true;
  PairCell& b = ledger.cell(fedsim::child_pair(kX, kY), 4);
  b.share_value = Rational(1, 2);
  b.active = true;

  ledger.finalize(10);
  CHECK(ledger.cells().size() == 2);
  for (const auto& [key, cell] : ledger.cells()) CHECK(cell.last == 10);
  CHECK(ledger.seat_integral_at(fedsim::person_pair(kAlice, kX), 10) == Rational(10));
  CHECK(ledger.share_integral_at(fedsim::child_pair(kX, kY), 10) == Rational(3));
}
