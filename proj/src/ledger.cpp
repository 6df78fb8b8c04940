#include "fedsim/ledger.hpp"

#include <stdexcept>

namespace fedsim {

PairCell& MetricsLedger::cell(const PairKey& key, Tick now) {
  auto [it, fresh] = cells_.try_emplace(key);
  if (fresh) it->second.last = now;
  return it->second;
}

const PairCell* MetricsLedger::find(const PairKey& key) const {
  auto it = cells_.find(key);
  return it == cells_.end() ? nullptr : &it->second;
}

void MetricsLedger::bring(PairCell& c, Tick t) {
  if (t < c.last) throw std::logic_error("ledger: time regression");
  if (t == c.last) return;
  Tick dt = t - c.last;
  if (c.seat_value != 0) c.seat_integral += Rational(c.seat_value) * Rational(dt);
  if (c.share_value != 0) c.share_integral += c.share_value * Rational(dt);
  c.last = t;
}

Rational MetricsLedger::seat_integral_at(const PairKey& key, Tick t) const {
  const PairCell* c = find(key);
  if (!c) return Rational(0);
  if (t < c->last) throw std::logic_error("ledger: time regression");
  Rational out = c->seat_integral;
  if (c->seat_value != 0) out += Rational(c->seat_value) * Rational(t - c->last);
  return out;
}

Rational MetricsLedger::share_integral_at(const PairKey& key, Tick t) const {
  const PairCell* c = find(key);
  if (!c) return Rational(0);
  if (t < c->last) throw std::logic_error("ledger: time regression");
  Rational out = c->share_integral;
  if (c->share_value != 0) out += c->share_value * Rational(t - c->last);
  return out;
}

Rational MetricsLedger::ratio_at(const PairKey& key, Tick t) const {
  Rational share = share_integral_at(key, t);
  if (share == 0) return Rational(1);
  return seat_integral_at(key, t) / share;
}

void MetricsLedger::finalize(Tick horizon) {
  for (auto& [key, c] : cells_) bring(c, horizon);
}

}  // namespace fedsim
