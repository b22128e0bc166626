#pragma once

// Shared aliases, error taxonomy and small utilities.
//
// Error classes map onto process exit codes at the CLI boundary:
//   std::invalid_argument (and qcat::invalid_input)  -> 2
//   qcat::property_failure                           -> 1
//   qcat::resource_guard                             -> 3

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qcat {

using Int = mpz_class;
using Rat = mpq_class;
using Cx  = std::complex<double>;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// A checked mathematical property failed (non-unitary intertwiner, order
// verification mismatch, inconsistent tensor factorization, ...).
struct property_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured resource guard tripped (dimension cap, factoring bound,
// table size, memory budget). Not a bug, a refusal.
struct resource_guard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Guards and tolerances used across the library. Every knob the CLI exposes
// funnels through here so tests can tighten or relax them in one place.
struct Limits {
  long dense_dim = 4096;                  // cap on N^g for dense operators
  std::size_t eig_budget_bytes = 256ull << 20;  // projector accumulation budget
  std::size_t count_table_max = 60'000'000;     // convolution table entries
  long order_crosscheck_max = 10'000;     // direct-powering cross-check bound
  double moment_scan_max = 10'000;        // cap on the p^{2g} alpha scan
};

struct Tolerances {
  double egorov        = 1e-10;  // ||U*T(e)U - T(eA)||_F / ||T(e)||_F
  double algebra       = 1e-12;  // operator-law residuals
  double unitarity     = 1e-10;
  double proportional  = 1e-8;   // X*X proportional to I
  double tensor_trans  = 1e-12;  // CRT translation residual
  double tensor_prop   = 1e-8;   // CRT propagator residual (after phase fit)
  double scalar_detect = 1e-9;   // ||U^t - zeta I||_max in period search
  double spectral_sum  = 1e-8;   // ||sum P_m - I||
  double eigen_label   = 1e-10;  // |theta_m^d - theta'| in power checks
  double power_egorov  = 1e-9;
  double twisted_id    = 1e-10;
  double sup_rel       = 1e-9;   // power-iteration relative convergence
  double kr_slack      = 1e-8;
  double moment_rel    = 1e-6;
};

inline long checked_pow_long(long b, int e, long cap) {
  long v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > cap / b) throw resource_guard("power exceeds cap");
    v *= b;
  }
  return v;
}

// xoshiro-free deterministic 64-bit generator (splitmix64). Used wherever a
// seeded, platform-stable stream is required; std::mt19937_64 is avoided in
// outputs that must be byte-identical across standard libraries.
struct SplitMix64 {
  u64 s;
  explicit SplitMix64(u64 seed) : s(seed) {}
  u64 next() {
    u64 z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  u64 below(u64 n) { return next() % n; }
  double unit() { return double(next() >> 11) * 0x1.0p-53; }
};

inline i64 imod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

} // namespace qcat
