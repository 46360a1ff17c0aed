#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "seriesolve/common.hpp"

namespace seriesolve {

// Arithmetic-cost instrumentation. A counter is activated for the current
// thread with CounterScope; all library operations then report into it.
// Counters are per-invocation: nested scopes stack, nothing is global.
struct OpCounter {
  u64 field_muls = 0;

  // polynomial multiplications, keyed by target precision
  std::map<std::size_t, u64> poly_muls;
  u64 poly_mul_calls = 0;

  // polynomial matrix products, keyed by (rows, target precision)
  std::map<std::pair<std::size_t, std::size_t>, u64> mat_muls;
  u64 mat_mul_calls = 0;

  // scalar r-by-r matrix products (NTT pointwise stage, constant-matrix work)
  std::map<std::size_t, u64> scalar_mat_muls;

  // division log: integer-image divisors are tracked by range, unit divisors
  // (leading-coefficient or pivot inversions) by count
  u64 int_divisions = 0;
  i64 int_divisor_min = 0;  // valid when int_divisions > 0
  i64 int_divisor_max = 0;
  u64 unit_divisions = 0;

  void reset() { *this = OpCounter{}; }
};

namespace detail {
OpCounter*& active_counter_slot();
}

inline OpCounter* active_counter() { return detail::active_counter_slot(); }

class CounterScope {
 public:
  explicit CounterScope(OpCounter& c) : prev_(detail::active_counter_slot()) {
    detail::active_counter_slot() = &c;
  }
  ~CounterScope() { detail::active_counter_slot() = prev_; }
  CounterScope(const CounterScope&) = delete;
  CounterScope& operator=(const CounterScope&) = delete;

 private:
  OpCounter* prev_;
};

// Silences counting for the current thread while alive. Used where an
// implementation trick performs field operations that are not part of the
// operation's arithmetic contract (for example the single field inversion
// behind a batch of integer inverses).
class CounterPause {
 public:
  CounterPause() : prev_(detail::active_counter_slot()) { detail::active_counter_slot() = nullptr; }
  ~CounterPause() { detail::active_counter_slot() = prev_; }
  CounterPause(const CounterPause&) = delete;
  CounterPause& operator=(const CounterPause&) = delete;

 private:
  OpCounter* prev_;
};

inline void count_field_muls(u64 n) {
  if (OpCounter* c = active_counter()) c->field_muls += n;
}

inline void count_poly_mul(std::size_t size) {
  if (OpCounter* c = active_counter()) {
    ++c->poly_mul_calls;
    ++c->poly_muls[size];
  }
}

inline void count_mat_mul(std::size_t rows, std::size_t size) {
  if (OpCounter* c = active_counter()) {
    ++c->mat_mul_calls;
    ++c->mat_muls[{rows, size}];
  }
}

inline void count_scalar_mat_muls(std::size_t r, u64 n) {
  if (OpCounter* c = active_counter()) c->scalar_mat_muls[r] += n;
}

inline void count_int_division(i64 k) {
  if (OpCounter* c = active_counter()) {
    if (c->int_divisions == 0) {
      c->int_divisor_min = c->int_divisor_max = k;
    } else {
      if (k < c->int_divisor_min) c->int_divisor_min = k;
      if (k > c->int_divisor_max) c->int_divisor_max = k;
    }
    ++c->int_divisions;
  }
}

inline void count_unit_divisions(u64 n = 1) {
  if (OpCounter* c = active_counter()) c->unit_divisions += n;
}

}  // namespace seriesolve
