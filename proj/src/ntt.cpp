#include "seriesolve/ntt.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "seriesolve/opcounter.hpp"

namespace seriesolve::ntt {

namespace {

// 64 MB of twiddles per modulus at most; larger sizes fall back to Karatsuba.
constexpr std::size_t kMaxTableSize = std::size_t(1) << 23;

std::shared_mutex cache_mutex;
std::map<std::pair<u64, std::size_t>, std::shared_ptr<const Tables>> cache;

// w of order exactly `order` (a power of two dividing p-1), deterministic.
u64 root_of_order(const PrimeField& f, u64 order) {
  for (u64 a = 2;; ++a) {
    u64 w = f.pow(a % f.modulus(), (f.modulus() - 1) / order);
    if (order == 1) return w;
    if (f.pow(w, order / 2) == f.modulus() - 1) return w;
  }
}

std::shared_ptr<const Tables> build_tables(const PrimeField& f, std::size_t size) {
  const kernels::MontParams& mp = f.mont();
  auto t = std::make_shared<Tables>();
  t->size = size;
  t->tw.assign(size, 0);
  // table constant, not a solver division: computed without touching the log
  t->inv_size = f.pow(f.from_uint(size), f.modulus() - 2);
  u64 w_top = root_of_order(f, size);  // order `size`, drives all half-widths
  for (std::size_t h = size / 2; h >= 1; h >>= 1) {
    // root of order 2h
    u64 w = w_top;
    for (std::size_t o = size; o > 2 * h; o >>= 1) w = f.mul(w, w);
    u64 acc = kernels::to_mont(mp, 1);
    u64 wm = kernels::to_mont(mp, w);
    for (std::size_t k = 0; k < h; ++k) {
      t->tw[h + k] = acc;
      acc = kernels::mont_mul(mp, acc, wm);
    }
    if (h == 1) break;
  }
  return t;
}

}  // namespace

std::size_t max_size(const PrimeField& f) {
  if (!f.mont_ok()) return 0;
  int s = f.two_adicity();
  std::size_t lim = s >= 63 ? (std::size_t(1) << 62) : (std::size_t(1) << s);
  return std::min(lim, kMaxTableSize);
}

std::shared_ptr<const Tables> get_tables(const PrimeField& f, std::size_t size) {
  if (size < 2 || size > max_size(f) || !is_pow2(size)) return nullptr;
  const auto key = std::make_pair(f.modulus(), size);
  {
    std::shared_lock lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::unique_lock lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = build_tables(f, size);
  cache.emplace(key, t);
  return t;
}

void forward(const PrimeField& f, const Tables& t, u64* a, std::size_t size) {
  const kernels::MontParams& mp = f.mont();
  const kernels::ZpKernels& k = f.kern();
  k.vec_scale(mp, a, a, mp.r2, size);  // into the Montgomery domain
  for (std::size_t h = size / 2; h >= 1; h >>= 1) {
    for (std::size_t b = 0; b < size; b += 2 * h)
      k.ntt_dif(mp, a + b, a + b + h, t.tw.data() + h, h);
    if (h == 1) break;
  }
  count_field_muls(size + (size / 2) * (u64)floor_log2(size));
}

void inverse(const PrimeField& f, const Tables& t, u64* a, std::size_t size) {
  const kernels::MontParams& mp = f.mont();
  const kernels::ZpKernels& k = f.kern();
  for (std::size_t h = 1; h < size; h <<= 1)
    for (std::size_t b = 0; b < size; b += 2 * h)
      k.ntt_dit(mp, a + b, a + b + h, t.tw.data() + h, h);
  // mont_mul(x*R, 1/size) = x/size: scaling and domain exit in one pass
  k.vec_scale(mp, a, a, t.inv_size, size);
  std::reverse(a + 1, a + size);
  count_field_muls(size + (size / 2) * (u64)floor_log2(size));
}

bool mul(const PrimeField& f, const u64* a, std::size_t na, const u64* b, std::size_t nb,
         u64* out, std::size_t need) {
  if (na == 0 || nb == 0) return false;
  std::size_t full = na + nb - 1;
  std::size_t size = next_pow2(full);
  auto t = get_tables(f, size);
  if (!t) return false;
  std::vector<u64> ta(size, 0), tb(size, 0);
  std::copy(a, a + na, ta.begin());
  std::copy(b, b + nb, tb.begin());
  forward(f, *t, ta.data(), size);
  forward(f, *t, tb.data(), size);
  f.kern().vec_mul(f.mont(), ta.data(), ta.data(), tb.data(), size);
  count_field_muls(size);
  inverse(f, *t, ta.data(), size);
  std::copy(ta.begin(), ta.begin() + std::min(need, full), out);
  if (need > full) std::fill(out + full, out + need, 0);
  return true;
}

}  // namespace seriesolve::ntt
