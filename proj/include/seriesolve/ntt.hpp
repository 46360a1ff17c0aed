#pragma once

#include <memory>
#include <vector>

#include "seriesolve/common.hpp"
#include "seriesolve/field.hpp"

namespace seriesolve::ntt {

// Twiddle layout: tw[h + k] = w_{2h}^k in Montgomery form, for every
// power-of-two half-width h < size. One table serves all sizes <= size.
struct Tables {
  std::size_t size = 0;
  std::vector<u64> tw;
  u64 inv_size = 0;  // size^-1 mod p, canonical
};

// Largest supported transform size for the modulus (power of two).
std::size_t max_size(const PrimeField& f);

// Lazily built per (modulus, size), concurrent readers, single writer.
// Returns nullptr when the modulus has no root of that order.
std::shared_ptr<const Tables> get_tables(const PrimeField& f, std::size_t size);

// In-place transform of length `size` (a power of two matching the tables).
// forward: canonical in, Montgomery-domain bit-reversed spectrum out.
// inverse: Montgomery-domain spectrum in, canonical coefficients out
// (scaling by 1/size included). Field-mul counts are reported.
void forward(const PrimeField& f, const Tables& t, u64* a, std::size_t size);
void inverse(const PrimeField& f, const Tables& t, u64* a, std::size_t size);

// Full product of a and b (sizes na, nb), first `need` coefficients written
// to out (need <= na + nb - 1). False when the transform size is unavailable.
bool mul(const PrimeField& f, const u64* a, std::size_t na, const u64* b, std::size_t nb,
         u64* out, std::size_t need);

}  // namespace seriesolve::ntt
