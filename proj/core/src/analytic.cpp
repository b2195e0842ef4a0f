#include "zonovol/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <string>

#include "zonovol/factors.hpp"
#include "zonovol/summation.hpp"

namespace zonovol {

namespace {

constexpr int kLogSpaceDimension = 12;
constexpr double kLogSpaceExponent = 650.0;
constexpr int kMaxRecursionDimension = 24;
constexpr int kQuadRecursionDimension = 9;

std::string pair_name(int i, int k) {
  return "(" + std::to_string(i) + ", " + std::to_string(k) + ")";
}

struct LogValue {
  double log_abs = 0.0;
  int sign = 1;
};

double to_linear(const LogValue& v) {
  return v.sign == 0 ? 0.0 : v.sign * std::exp(v.log_abs);
}

// Expansion terms are evaluated in binary128: on clustered spectra the
// subset sum cancels up to ~16 digits.  Arithmetic comes from libgcc.
__extension__ typedef __float128 Quad;

template <typename T>
T magnitude(T x) {
  return x < 0 ? -x : x;
}

template <typename T>
T phi_eval(std::span<const double> l, PhiMode mode, const Tolerances& tol, int skip_self = -1,
           int drop_pair_a = -1, int drop_pair_b = -1) {
  const int s = static_cast<int>(l.size());
  T p = 1;
  for (int i = 0; i < s; ++i) {
    for (int k = i + 1; k < s; ++k) {
      const T num = static_cast<T>(l[k]) - static_cast<T>(l[i]);
      if (i == drop_pair_a && k == drop_pair_b) {
        p *= num;
        continue;
      }
      const T den = mode == PhiMode::Continuous
                        ? -(static_cast<T>(l[i]) + static_cast<T>(l[k]))
                        : static_cast<T>(1) - static_cast<T>(l[i]) * static_cast<T>(l[k]);
      if (magnitude(den) < static_cast<T>(tol.eps_sing)) {
        throw SingularFactorError("singular pair factor at eigenvalue pair " +
                                      pair_name(i + 1, k + 1),
                                  i + 1, k + 1);
      }
      p *= num / den;
    }
  }
  for (int i = 0; i < s; ++i) {
    if (i == skip_self) continue;
    const T x = static_cast<T>(l[i]);
    const T den = mode == PhiMode::DiscretePositive   ? 1 - x
                  : mode == PhiMode::DiscreteNegative ? 1 + x
                                                      : x;
    if (magnitude(den) < static_cast<T>(tol.eps_sing)) {
      throw SingularFactorError("singular factor at eigenvalue " + std::to_string(i + 1), i + 1,
                                0);
    }
    p /= den;
  }
  return p;
}

long double phi_direct(std::span<const double> l, PhiMode mode, const Tolerances& tol,
                       int skip_self = -1, int drop_pair_a = -1, int drop_pair_b = -1) {
  return phi_eval<long double>(l, mode, tol, skip_self, drop_pair_a, drop_pair_b);
}

// x^N by squaring; exact exponent handling keeps the relative error near
// log2(N) ulps.
template <typename T>
T int_power(T x, long long N) {
  const bool invert = N < 0;
  unsigned long long e = invert ? 0ull - static_cast<unsigned long long>(N)
                                : static_cast<unsigned long long>(N);
  T result = 1;
  while (e) {
    if (e & 1ull) result *= x;
    x *= x;
    e >>= 1;
  }
  return invert ? 1 / result : result;
}

template <typename T>
T upsilon_eval(std::span<const double> l, double horizon, PowerMode mode) {
  if (mode == PowerMode::Continuous) {
    long double s = 0.0L;
    for (double x : l) s += x;
    return static_cast<T>(std::exp(static_cast<long double>(horizon) * s));
  }
  const auto N = static_cast<long long>(horizon);
  T p = 1;
  for (double x : l) {
    p *= int_power(static_cast<T>(mode == PowerMode::DiscreteAbs ? std::abs(x) : x), N);
  }
  return p;
}

LogValue upsilon_log(std::span<const double> l, double horizon, PowerMode mode) {
  LogValue out;
  if (mode == PowerMode::Continuous) {
    double s = 0.0;
    for (double x : l) s += x;
    out.log_abs = horizon * s;
    return out;
  }
  const auto N = static_cast<long long>(horizon);
  for (double x : l) {
    if (x == 0.0) {
      if (N > 0) {
        out.sign = 0;
        return out;
      }
      if (N < 0) throw DomainError("negative power of a zero eigenvalue");
      continue;
    }
    out.log_abs += horizon * std::log(std::abs(x));
    if (mode == PowerMode::Discrete && x < 0.0 && (N % 2 != 0)) out.sign = -out.sign;
  }
  return out;
}

// m * 2^e with |m| in [0.5, 1): the log-magnitude form of a term.  The
// mantissa stays binary128, so cancelling sums keep their digits while the
// exponent carries the range.
struct Scaled {
  Quad m = 1;
  long long e = 0;
};

constexpr int kQuadBias = 16383;
constexpr long long kExactPowerLimit = 256;

std::uint64_t high_word(Quad x) {
  std::uint64_t w[2];
  std::memcpy(w, &x, sizeof w);
  return w[1];
}

Quad with_high_word(Quad x, std::uint64_t hi) {
  std::uint64_t w[2];
  std::memcpy(w, &x, sizeof w);
  w[1] = hi;
  std::memcpy(&x, w, sizeof w);
  return x;
}

// 2^k for k in the normal binary128 range.
Quad pow2(long long k) {
  if (k <= -kQuadBias + 1) return 0;
  return with_high_word(Quad(1), static_cast<std::uint64_t>(k + kQuadBias) << 48);
}

// Rewrites the binary exponent field so |m| lands in [0.5, 1).
void normalize(Scaled& v) {
  if (v.m == 0) {
    v.e = 0;
    return;
  }
  std::uint64_t hi = high_word(v.m);
  long long field = static_cast<long long>((hi >> 48) & 0x7fff);
  if (field == 0) {  // subnormal mantissa, lift it first
    v.m *= pow2(200);
    v.e -= 200;
    hi = high_word(v.m);
    field = static_cast<long long>((hi >> 48) & 0x7fff);
  }
  v.e += field - (kQuadBias - 1);
  hi = (hi & ~(std::uint64_t{0x7fff} << 48)) | (std::uint64_t{kQuadBias - 1} << 48);
  v.m = with_high_word(v.m, hi);
}

Scaled times(Scaled a, const Scaled& b) {
  a.m *= b.m;
  a.e += b.e;
  normalize(a);
  return a;
}

Scaled scaled(Quad x) {
  Scaled v{x, 0};
  normalize(v);
  return v;
}

// e^x as m * 2^k.  Relative error about |x| * 2^-64 from the reduction.
Scaled scaled_exp(long double x) {
  const long double ln2 = 0.693147180559945309417232121458176568L;
  const long double k = std::floor(x / ln2);
  Scaled out = scaled(static_cast<Quad>(std::exp(x - k * ln2)));
  out.e += static_cast<long long>(k);
  return out;
}

// x^N: squaring is exact to a few binary128 ulps for moderate N; past that
// the log form is cheaper and the terms it feeds are far below the sum.
Scaled scaled_power(double x, long long N) {
  if (N == 0) return {};
  if (x == 0.0) {
    if (N < 0) throw DomainError("negative power of a zero eigenvalue");
    return {0, 0};
  }
  if (N > kExactPowerLimit || N < -kExactPowerLimit) {
    Scaled out = scaled_exp(static_cast<long double>(N) * std::log(std::abs(static_cast<long double>(x))));
    if (x < 0.0 && (N % 2 != 0)) out.m = -out.m;
    return out;
  }
  const bool invert = N < 0;
  unsigned long long e = invert ? 0ull - static_cast<unsigned long long>(N)
                                : static_cast<unsigned long long>(N);
  Scaled result;
  Scaled base = scaled(invert ? 1 / static_cast<Quad>(x) : static_cast<Quad>(x));
  while (e) {
    if (e & 1ull) result = times(result, base);
    base = times(base, base);
    e >>= 1;
  }
  return result;
}

// Per-eigenvalue power factor; Upsilon_J is the product over J.
Scaled upsilon_one(double x, double horizon, PowerMode mode) {
  if (mode == PowerMode::Continuous) return scaled_exp(static_cast<long double>(horizon) * x);
  return scaled_power(mode == PowerMode::DiscreteAbs ? std::abs(x) : x,
                      static_cast<long long>(horizon));
}

double to_double(const Scaled& v) {
  if (v.m == 0) return 0.0;
  if (v.e > 4000) return v.m < 0 ? -HUGE_VAL : HUGE_VAL;
  if (v.e < -4000) return 0.0;
  return std::ldexp(static_cast<double>(v.m), static_cast<int>(v.e));
}

void validate_horizon(double horizon, PowerMode mode) {
  if (!std::isfinite(horizon)) throw ArgumentError("horizon must be finite");
  if (mode == PowerMode::Continuous) {
    if (horizon < 0.0) throw ArgumentError("continuous horizon T must be nonnegative");
  } else if (horizon != std::floor(horizon)) {
    throw ArgumentError("discrete horizon N must be an integer");
  }
}

void require_ascending(std::span<const double> lambdas) {
  if (lambdas.empty()) throw ArgumentError("empty spectrum");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!std::isfinite(lambdas[i])) throw ArgumentError("spectrum has non-finite entries");
    if (i > 0 && lambdas[i] < lambdas[i - 1]) {
      throw ArgumentError("eigenvalues must be sorted ascending");
    }
  }
}

[[noreturn]] void throw_class(SpectrumClass cls, const std::string& context) {
  throw DomainError(std::string(to_string(cls)) + ": " + context, cls);
}

void require_class(std::span<const double> lambdas, TimeDomain domain, SpectrumClass wanted,
                   const Tolerances& tol, const std::string& context) {
  const SpectrumClass cls = classify_spectrum(lambdas, domain, tol);
  if (cls != wanted) throw_class(cls, context);
}

void require_horizon_at_least_n(int N, std::size_t n) {
  if (N < static_cast<int>(n)) {
    throw ArgumentError("the expansion needs N >= n (N = " + std::to_string(N) +
                        ", n = " + std::to_string(n) + ")");
  }
}

std::vector<double> select(std::span<const double> lambdas, const IndexTuple& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (int j : idx) out.push_back(lambdas[static_cast<std::size_t>(j - 1)]);
  return out;
}

IndexTuple complement_of(const IndexTuple& subset, int n) {
  IndexTuple out;
  std::size_t p = 0;
  for (int j = 1; j <= n; ++j) {
    if (p < subset.size() && subset[p] == j) {
      ++p;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

int parity_sign(long long e) { return (e % 2 == 0) ? 1 : -1; }

int coefficient(const IndexTuple& subset, int n, CoefficientRule rule) {
  if (rule == CoefficientRule::Standard) return sign_coefficient(subset, n);
  long long sum = 0;
  for (int j : subset) sum += j;
  return parity_sign(sum);
}

bool needs_log_space(std::span<const double> l, const ExpansionSpec& spec) {
  if (static_cast<int>(l.size()) >= kLogSpaceDimension) return true;
  double hi = 0.0;
  double lo = 0.0;
  for (double x : l) {
    double e = 0.0;
    if (spec.power == PowerMode::Continuous) {
      e = spec.horizon * x;
    } else if (x != 0.0) {
      e = spec.horizon * std::log(std::abs(x));
    }
    (e > 0.0 ? hi : lo) += e;
  }
  return hi > kLogSpaceExponent || lo < -kLogSpaceExponent;
}

void validate_members(const IndexTuple& members, int n) {
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (members[k] < 1 || members[k] > n) throw ArgumentError("member index out of range");
    if (k > 0 && members[k] <= members[k - 1]) {
      throw ArgumentError("member indices must be strictly ascending");
    }
  }
}

int position_of(const IndexTuple& members, int idx) {
  const auto it = std::find(members.begin(), members.end(), idx);
  return it == members.end() ? -1 : static_cast<int>(it - members.begin());
}

void validate_index(int i, int n) {
  if (i < 1 || i > n) throw ArgumentError("eigenvalue index out of range");
}

}  // namespace

double phi_factor(std::span<const double> lambdas, PhiMode mode, const Tolerances& tol) {
  return phi_direct(lambdas, mode, tol);
}

double upsilon_power(std::span<const double> lambdas, double horizon, PowerMode mode) {
  validate_horizon(horizon, mode);
  const double direct = static_cast<double>(upsilon_eval<long double>(lambdas, horizon, mode));
  if (std::isfinite(direct) && direct != 0.0) return direct;
  const LogValue lv = upsilon_log(lambdas, horizon, mode);
  const double v = to_linear(lv);
  if (!std::isfinite(v)) throw DomainError("power factor overflows double precision");
  return v;
}

int sign_coefficient(const IndexTuple& subset, int n) {
  validate_members(subset, n);
  long long sum = 0;
  for (int j : subset) sum += j;
  const long long s = static_cast<long long>(subset.size());
  return parity_sign((static_cast<long long>(n) + 1) * s - sum);
}

double quasi_vandermonde(std::span<const double> lambdas, std::span<const int> exponents) {
  if (lambdas.size() != exponents.size() || lambdas.empty()) {
    throw ArgumentError("quasi-Vandermonde needs as many exponents as eigenvalues");
  }
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k] < 0 || (k > 0 && exponents[k] <= exponents[k - 1])) {
      throw ArgumentError("exponents must be nonnegative and strictly increasing");
    }
  }
  const std::size_t n = lambdas.size();
  std::vector<long double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      a[i + k * n] = std::pow(static_cast<long double>(lambdas[i]), exponents[k]);
    }
  }
  long double det = 1.0L;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i + k * n]) > std::abs(a[pivot + k * n])) pivot = i;
    }
    if (a[pivot + k * n] == 0.0L) return 0.0;
    if (pivot != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(a[k + j * n], a[pivot + j * n]);
      det = -det;
    }
    det *= a[k + k * n];
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = a[i + k * n] / a[k + k * n];
      for (std::size_t j = k + 1; j < n; ++j) a[i + j * n] -= f * a[k + j * n];
    }
  }
  return static_cast<double>(det);
}

// Bitmask DP over deleted-eigenvalue sequences.  `tiny` is the flush
// threshold for decaying powers.
template <typename T>
double recursion_dp(std::span<const double> lambdas, int N, T tiny) {
  const int n = static_cast<int>(lambdas.size());
  const std::uint32_t full = (1u << n) - 1u;
  const std::size_t states = std::size_t{1} << n;
  std::vector<T> cur(states, T(0));
  std::vector<T> next(states, T(0));
  std::vector<T> power(static_cast<std::size_t>(n), T(1));  // lambda_j^{t-1}
  cur[0] = 1.0;

  auto vandermonde = [&](std::uint32_t mask) {
    T p = T(1);
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      for (int k = i + 1; k < n; ++k) {
        if (mask >> k & 1u) p *= static_cast<T>(lambdas[k]) - static_cast<T>(lambdas[i]);
      }
    }
    return p;
  };

  for (int t = 1; t <= N; ++t) {
    next[0] = 1.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const int s = std::popcount(mask);
      if (t < s) {
        next[mask] = 0.0;
      } else if (t == s && s >= 2) {
        next[mask] = vandermonde(mask);
      } else {
        // V_t = V_{t-1} + sum_p (-1)^{s+p} l_{e_p}^{t-1} V_{t-1}^{S \ e_p}
        T acc = cur[mask];
        int p = 0;
        for (int j = 0; j < n; ++j) {
          if (!(mask >> j & 1u)) continue;
          ++p;
          const T term = power[static_cast<std::size_t>(j)] * cur[mask & ~(1u << j)];
          acc += ((s + p) % 2 == 0) ? term : -term;
        }
        next[mask] = acc;
      }
    }
    std::swap(cur, next);
    for (int j = 0; j < n; ++j) {
      // Flush below the normal range: x87 denormals are slow and a decaying
      // power can stall at the smallest one.
      T& p = power[static_cast<std::size_t>(j)];
      p *= static_cast<T>(lambdas[j]);
      if (magnitude(p) < tiny) p = T(0);
    }
  }
  return static_cast<double>(cur[full]);
}

double recursive_volume_sum(std::span<const double> lambdas, int N, const Tolerances& tol) {
  require_ascending(lambdas);
  const int n = static_cast<int>(lambdas.size());
  if (n > kMaxRecursionDimension) throw ArgumentError("recursion limited to n <= 24");
  if (N < 1) throw ArgumentError("horizon N must be at least 1");
  if (classify_spectrum(lambdas, TimeDomain::Discrete, tol) == SpectrumClass::Degenerate) {
    throw_class(SpectrumClass::Degenerate, "recursion needs distinct eigenvalues");
  }
  if (N < n) return 0.0;

  // The alternating updates cancel more as n grows; binary128 keeps large
  // clustered spectra at double accuracy.
  if (n >= kQuadRecursionDimension) {
    return recursion_dp<Quad>(lambdas, N, pow2(-16000));
  }
  return recursion_dp<long double>(lambdas, N, std::numeric_limits<long double>::min());
}

Expansion expansion_sum(std::span<const double> lambdas, const ExpansionSpec& spec,
                        const Tolerances& tol) {
  require_ascending(lambdas);
  validate_horizon(spec.horizon, spec.power);
  const int n = static_cast<int>(lambdas.size());

  Expansion out;
  out.log_space = needs_log_space(lambdas, spec);
  out.terms.reserve(std::size_t{1} << std::min(n, 20));
  std::vector<Quad> values;
  std::vector<Scaled> scaled_values;
  std::vector<Scaled> powers;
  if (out.log_space) {
    for (double x : lambdas) powers.push_back(upsilon_one(x, spec.horizon, spec.power));
  }
  values.reserve(out.terms.capacity());

  for (int s = 0; s <= n; ++s) {
    for (const IndexTuple& subset : enumerate_subsets(1, n, s)) {
      const std::vector<double> in = select(lambdas, subset);
      const std::vector<double> out_vals = select(lambdas, complement_of(subset, n));
      SubsetTerm term;
      term.subset = subset;
      term.sign = coefficient(subset, n, spec.coefficient);
      if (out.log_space) {
        Scaled up;
        for (int j : subset) up = times(up, powers[static_cast<std::size_t>(j - 1)]);
        const Quad pin = phi_eval<Quad>(in, spec.phi, tol);
        const Quad pout = phi_eval<Quad>(out_vals, spec.phi, tol);
        const Scaled v = times(up, scaled(term.sign * pin * pout));
        term.upsilon_pow = to_double(up);
        term.phi_in = static_cast<double>(pin);
        term.phi_out = static_cast<double>(pout);
        term.value = to_double(v);
        scaled_values.push_back(v);
      } else {
        const Quad up = upsilon_eval<Quad>(in, spec.horizon, spec.power);
        const Quad pin = phi_eval<Quad>(in, spec.phi, tol);
        const Quad pout = phi_eval<Quad>(out_vals, spec.phi, tol);
        const Quad v = term.sign * up * pin * pout;
        term.upsilon_pow = static_cast<double>(up);
        term.phi_in = static_cast<double>(pin);
        term.phi_out = static_cast<double>(pout);
        term.value = static_cast<double>(v);
        values.push_back(v);
      }
      if (!std::isfinite(term.value)) {
        throw DomainError("expansion term overflows double precision");
      }
      out.terms.push_back(std::move(term));
    }
  }

  long long top = std::numeric_limits<long long>::min();
  for (const Scaled& v : scaled_values) {
    if (v.m != 0) top = std::max(top, v.e);
  }
  for (const Scaled& v : scaled_values) {
    // Anything 2^-16000 below the largest term cannot reach the sum.
    if (v.m != 0 && v.e - top > -16000) values.push_back(v.m * pow2(v.e - top));
  }
  std::sort(values.begin(), values.end(),
            [](Quad a, Quad b) { return magnitude(a) < magnitude(b); });
  BasicNeumaierSum<Quad> acc;
  for (Quad v : values) acc.add(v);
  if (out.log_space) {
    Scaled total = scaled(acc.value());
    if (total.m != 0) total.e += top;
    out.sum = to_double(total);
  } else {
    out.sum = static_cast<double>(acc.value());
  }
  return out;
}

Expansion analytic_volume_sum(std::span<const double> lambdas, int N, const Tolerances& tol) {
  require_ascending(lambdas);
  require_horizon_at_least_n(N, lambdas.size());
  require_class(lambdas, TimeDomain::Discrete, SpectrumClass::AllPositiveDistinct, tol,
                "finite-time expansion needs 0 < l_1 < ... < l_n");
  return expansion_sum(lambdas,
                       {PhiMode::DiscretePositive, PowerMode::Discrete, static_cast<double>(N),
                        CoefficientRule::Standard},
                       tol);
}

double analytic_volume_sum_complement(std::span<const double> lambdas, int N,
                                      const Tolerances& tol) {
  require_ascending(lambdas);
  require_horizon_at_least_n(N, lambdas.size());
  require_class(lambdas, TimeDomain::Discrete, SpectrumClass::AllPositiveDistinct, tol,
                "finite-time expansion needs 0 < l_1 < ... < l_n");
  const int n = static_cast<int>(lambdas.size());
  BasicNeumaierSum<Quad> acc;
  for (int s = 0; s <= n; ++s) {
    for (const IndexTuple& subset : enumerate_subsets(1, n, s)) {
      const IndexTuple comp = complement_of(subset, n);
      const std::vector<double> comp_vals = select(lambdas, comp);
      acc.add(sign_coefficient(comp, n) * upsilon_eval<Quad>(comp_vals, N, PowerMode::Discrete) *
              phi_eval<Quad>(select(lambdas, subset), PhiMode::DiscretePositive, tol) *
              phi_eval<Quad>(comp_vals, PhiMode::DiscretePositive, tol));
    }
  }
  return static_cast<double>(acc.value());
}

double analytic_volume_sum_grouped(std::span<const double> lambdas, int N,
                                   const Tolerances& tol) {
  require_ascending(lambdas);
  require_horizon_at_least_n(N, lambdas.size());
  require_class(lambdas, TimeDomain::Discrete, SpectrumClass::AllPositiveDistinct, tol,
                "finite-time expansion needs 0 < l_1 < ... < l_n");
  const int n = static_cast<int>(lambdas.size());
  // The cross factor is validated in double, then re-evaluated in extended
  // precision like the other forms.
  auto cross = [&](const IndexTuple& in, const IndexTuple& out) {
    (void)cross_factor(in, out, lambdas, tol);
    Quad p = 1;
    for (int j : in) {
      const Quad lj = lambdas[static_cast<std::size_t>(j - 1)];
      for (int k : out) {
        const Quad lk = lambdas[static_cast<std::size_t>(k - 1)];
        p *= (1 - lj * lk) / (lk - lj);
      }
    }
    return p;
  };
  BasicNeumaierSum<Quad> acc;
  for (int s = 0; s <= n; ++s) {
    for (const IndexTuple& subset : enumerate_subsets(1, n, s)) {
      // Phi_J Phi_{n\J} = Phi_{1..n} F_J^{n\J} (-1)^{inversions}, where the
      // inversions count complement indices below each member of J.
      long long sum = 0;
      for (int j : subset) sum += j;
      const long long inversions = sum - static_cast<long long>(s) * (s + 1) / 2;
      acc.add(parity_sign(inversions) * sign_coefficient(subset, n) *
              upsilon_eval<Quad>(select(lambdas, subset), N, PowerMode::Discrete) *
              cross(subset, complement_of(subset, n)));
    }
  }
  return static_cast<double>(acc.value() *
                             phi_eval<Quad>(lambdas, PhiMode::DiscretePositive, tol));
}

double infinite_volume_sum(std::span<const double> lambdas, const Tolerances& tol) {
  require_ascending(lambdas);
  for (double l : lambdas) {
    if (std::abs(l) >= 1.0 - tol.eps_sing) {
      throw DomainError("infinite-time region unbounded: |lambda| >= 1");
    }
  }
  const SpectrumClass cls = classify_spectrum(lambdas, TimeDomain::Discrete, tol);
  if (cls != SpectrumClass::AllPositiveDistinct && cls != SpectrumClass::AllNegativeDistinct) {
    throw_class(cls, "infinite-time formula needs distinct same-sign eigenvalues");
  }
  double p = 1.0;
  const std::size_t n = lambdas.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      p *= (lambdas[k] - lambdas[i]) / (1.0 - lambdas[i] * lambdas[k]);
    }
    p /= 1.0 - std::abs(lambdas[i]);
  }
  return std::abs(p);
}

Expansion negative_volume_sum(std::span<const double> lambdas, int N, const Tolerances& tol) {
  require_ascending(lambdas);
  require_horizon_at_least_n(N, lambdas.size());
  require_class(lambdas, TimeDomain::Discrete, SpectrumClass::AllNegativeDistinct, tol,
                "negative-spectrum expansion needs l_1 < ... < l_n < 0");
  return expansion_sum(lambdas,
                       {PhiMode::DiscreteNegative, PowerMode::DiscreteAbs,
                        static_cast<double>(N), CoefficientRule::Reversed},
                       tol);
}

Expansion narrow_volume_sum(std::span<const double> lambdas, int N, const Tolerances& tol) {
  require_ascending(lambdas);
  require_horizon_at_least_n(N, lambdas.size());
  require_class(lambdas, TimeDomain::Discrete, SpectrumClass::AllPositiveDistinct, tol,
                "narrow-region expansion needs 0 < l_1 < ... < l_n");
  return expansion_sum(lambdas,
                       {PhiMode::DiscretePositive, PowerMode::Discrete,
                        -static_cast<double>(N), CoefficientRule::Standard},
                       tol);
}

Expansion ct_volume_sum(std::span<const double> lambdas, double T, const Tolerances& tol) {
  require_ascending(lambdas);
  if (!std::isfinite(T) || T < 0.0) throw ArgumentError("horizon T must be finite and >= 0");
  const SpectrumClass cls = classify_spectrum(lambdas, TimeDomain::Continuous, tol);
  if (cls == SpectrumClass::Degenerate || cls == SpectrumClass::NearSingularFactor) {
    throw_class(cls, "continuous-time expansion needs distinct nonzero eigenvalues with "
                     "nonzero pair sums");
  }
  Expansion e = expansion_sum(
      lambdas, {PhiMode::Continuous, PowerMode::Continuous, T, CoefficientRule::Standard}, tol);
  if (T == 0.0) e.sum = 0.0;
  return e;
}

std::string_view to_string(Route route) noexcept {
  switch (route) {
    case Route::Auto:
      return "auto";
    case Route::Direct:
      return "direct";
    case Route::Recursive:
      return "recursive";
    case Route::Analytic:
      return "analytic";
    case Route::Infinite:
      return "infinite";
  }
  return "unknown";
}

namespace {

bool same_sign(std::span<const double> l) {
  return std::all_of(l.begin(), l.end(), [](double x) { return x > 0.0; }) ||
         std::all_of(l.begin(), l.end(), [](double x) { return x < 0.0; });
}

Route resolve_route(Route requested, SpectrumClass cls, std::span<const double> l, int N) {
  if (requested != Route::Auto) return requested;
  const int n = static_cast<int>(l.size());
  if (N < n) return Route::Direct;
  switch (cls) {
    case SpectrumClass::AllPositiveDistinct:
    case SpectrumClass::AllNegativeDistinct:
      return Route::Analytic;
    case SpectrumClass::NearSingularFactor:
      return same_sign(l) ? Route::Recursive : Route::Direct;
    default:
      return Route::Direct;
  }
}

void finish_eigen_report(VolumeReport& r, const EigenStructure& eig, double normalized) {
  const double scale = std::ldexp(eig.prefactor(), eig.size());
  r.normalized_sum = normalized;
  if (normalized < 0.0) r.diagnostics.emplace_back("normalized sum is negative");
  r.volume = scale * std::abs(normalized);
}

double direct_diagonal_volume(const EigenStructure& eig, int N, VolumeReport& r) {
  const int n = eig.size();
  Matrix P(n, N);
  Matrix powers(n, N);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k < N; ++k) {
      powers(i, k) = p;
      P(i, k) = eig.betas[static_cast<std::size_t>(i)] * p;
      p *= eig.lambdas[static_cast<std::size_t>(i)];
    }
  }
  const double unit = unit_cube_volume(P);
  double beta_prod = 1.0;
  for (double b : eig.betas) beta_prod *= std::abs(b);
  r.normalized_sum = beta_prod != 0.0 ? unit / beta_prod : unit_cube_volume(powers);
  return std::ldexp(eig.det_wd_inv_abs * unit, n);
}

}  // namespace

VolumeReport full_volume(const EigenStructure& eig, int N, Route route, const Tolerances& tol) {
  if (N < 1) throw ArgumentError("horizon N must be at least 1");
  if (route == Route::Infinite) return infinite_volume(eig, tol);

  VolumeReport r;
  const std::span<const double> l(eig.lambdas);
  const SpectrumClass cls = classify_spectrum(l, TimeDomain::Discrete, tol);
  r.spectrum = cls;
  if (eig.prefactor() == 0.0) r.diagnostics.emplace_back("uncontrollable mode: some beta_i = 0");

  r.route = resolve_route(route, cls, l, N);
  switch (r.route) {
    case Route::Analytic: {
      if (cls == SpectrumClass::AllPositiveDistinct) {
        Expansion e = analytic_volume_sum(l, N, tol);
        finish_eigen_report(r, eig, e.sum);
        r.terms = std::move(e.terms);
      } else if (cls == SpectrumClass::AllNegativeDistinct) {
        Expansion e = negative_volume_sum(l, N, tol);
        finish_eigen_report(r, eig, e.sum);
        r.terms = std::move(e.terms);
      } else {
        throw_class(cls, "analytic route unavailable for this spectrum");
      }
      break;
    }
    case Route::Recursive: {
      if (cls == SpectrumClass::Degenerate || !same_sign(l)) {
        throw_class(cls == SpectrumClass::Degenerate ? cls : SpectrumClass::MixedSign,
                    "recursive route needs distinct same-sign eigenvalues");
      }
      if (l.front() > 0.0) {
        finish_eigen_report(r, eig, recursive_volume_sum(l, N, tol));
      } else {
        std::vector<double> mags;
        for (auto it = l.rbegin(); it != l.rend(); ++it) mags.push_back(-*it);
        finish_eigen_report(r, eig, recursive_volume_sum(mags, N, tol));
      }
      break;
    }
    case Route::Direct:
      r.volume = direct_diagonal_volume(eig, N, r);
      break;
    case Route::Auto:
    case Route::Infinite:
      break;
  }
  return r;
}

VolumeReport full_volume(const StateSpaceModel& model, int N, Route route,
                         const Tolerances& tol) {
  if (N < 1) throw ArgumentError("horizon N must be at least 1");

  auto direct_report = [&](std::optional<Diagonalization> d) {
    VolumeReport r;
    r.route = Route::Direct;
    r.volume = symmetric_volume(reachability_generators(model, N));
    if (d) {
      r.spectrum = d->spectrum;
      if (d->structure && d->structure->prefactor() > 0.0) {
        r.normalized_sum =
            r.volume / std::ldexp(d->structure->prefactor(), model.states());
      }
    }
    if (model.inputs() > 1) r.diagnostics.emplace_back("multi-input model: direct route only");
    return r;
  };

  if (model.inputs() > 1) {
    if (route == Route::Auto || route == Route::Direct) return direct_report(std::nullopt);
    throw ArgumentError("route '" + std::string(to_string(route)) +
                        "' needs a single-input model");
  }

  Diagonalization d = diagonalize(model, TimeDomain::Discrete, tol);
  if (route == Route::Direct) return direct_report(std::move(d));
  if (!d.structure) {
    if (route == Route::Auto) return direct_report(std::move(d));
    throw_class(d.spectrum, "no real diagonal form");
  }
  const Route resolved = resolve_route(route, d.spectrum, d.structure->lambdas, N);
  if (resolved == Route::Direct) return direct_report(std::move(d));
  return full_volume(*d.structure, N, resolved, tol);
}

VolumeReport infinite_volume(const EigenStructure& eig, const Tolerances& tol) {
  VolumeReport r;
  r.route = Route::Infinite;
  r.spectrum = classify_spectrum(eig.lambdas, TimeDomain::Discrete, tol);
  finish_eigen_report(r, eig, infinite_volume_sum(eig.lambdas, tol));
  return r;
}

double lemma2_residual(std::span<const double> lambdas, const Tolerances& tol) {
  if (lambdas.empty()) throw ArgumentError("empty spectrum");
  const std::size_t n = lambdas.size();
  double prod = 1.0;
  for (double l : lambdas) prod *= l;
  const double lhs = (1.0 - prod) * phi_direct(lambdas, PhiMode::DiscretePositive, tol);
  NeumaierSum rhs;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> rest;
    double rest_prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      rest.push_back(lambdas[i]);
      rest_prod *= lambdas[i];
    }
    // (-1)^{1+k} with 1-based k
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    rhs.add(sgn * rest_prod * phi_direct(rest, PhiMode::DiscretePositive, tol));
  }
  return lhs - rhs.value();
}

double lemma3_equal_residual(std::span<const double> lambdas, const IndexTuple& members, int i,
                             int j, const Tolerances& tol) {
  const int n = static_cast<int>(lambdas.size());
  validate_members(members, n);
  validate_index(i, n);
  validate_index(j, n);
  if (i == j) throw ArgumentError("lemma 3 equal substitution needs i != j");

  std::vector<double> vals = select(lambdas, members);
  const int pi = position_of(members, i);
  const int pj = position_of(members, j);
  if (pj >= 0) vals[static_cast<std::size_t>(pj)] = lambdas[static_cast<std::size_t>(i - 1)];
  const double lhs = phi_direct(vals, PhiMode::DiscretePositive, tol);

  double rhs = 0.0;
  if (pi >= 0 && pj >= 0) {
    rhs = 0.0;
  } else if (pj >= 0) {
    IndexTuple moved;
    int between = 0;
    for (int k : members) {
      if (k != j) moved.push_back(k);
      if (k > std::min(i, j) && k < std::max(i, j)) ++between;
    }
    moved.push_back(i);
    std::sort(moved.begin(), moved.end());
    rhs = parity_sign(between) *
          phi_direct(select(lambdas, moved), PhiMode::DiscretePositive, tol);
  } else {
    rhs = phi_direct(select(lambdas, members), PhiMode::DiscretePositive, tol);
  }
  return lhs - rhs;
}

double lemma3_unit_residual(std::span<const double> lambdas, const IndexTuple& members, int i,
                            const Tolerances& tol) {
  const int n = static_cast<int>(lambdas.size());
  validate_members(members, n);
  validate_index(i, n);
  std::vector<double> vals = select(lambdas, members);
  const int h = position_of(members, i);
  if (h < 0) {
    // (1 - l_i) vanishes and Phi_L does not involve l_i.
    const double lhs = (1.0 - 1.0) * phi_direct(vals, PhiMode::DiscretePositive, tol);
    return lhs;
  }
  vals[static_cast<std::size_t>(h)] = 1.0;
  const double lhs = phi_direct(vals, PhiMode::DiscretePositive, tol, h);
  IndexTuple rest;
  for (int k : members) {
    if (k != i) rest.push_back(k);
  }
  const int m = static_cast<int>(members.size());
  const double rhs =
      parity_sign(m - (h + 1)) * phi_direct(select(lambdas, rest), PhiMode::DiscretePositive, tol);
  return lhs - rhs;
}

double lemma3_reciprocal_residual(std::span<const double> lambdas, const IndexTuple& members,
                                  int i, int j, const Tolerances& tol) {
  const int n = static_cast<int>(lambdas.size());
  validate_members(members, n);
  validate_index(i, n);
  validate_index(j, n);
  if (i >= j) throw ArgumentError("lemma 3 reciprocal substitution needs i < j");
  const double li = lambdas[static_cast<std::size_t>(i - 1)];
  if (std::abs(li) < tol.eps_sing || std::abs(1.0 - li) < tol.eps_sing) {
    throw DomainError("inadmissible reciprocal substitution: lambda_i must differ from 0 and 1");
  }

  std::vector<double> vals = select(lambdas, members);
  const int h = position_of(members, i);
  const int s = position_of(members, j);
  if (s >= 0) vals[static_cast<std::size_t>(s)] = 1.0 / li;

  if (h >= 0 && s >= 0) {
    const double lhs = phi_direct(vals, PhiMode::DiscretePositive, tol, -1, h, s);
    IndexTuple rest;
    for (int k : members) {
      if (k != i && k != j) rest.push_back(k);
    }
    const double rhs = parity_sign(s - h) * (1.0 + li) / (1.0 - li) *
                       phi_direct(select(lambdas, rest), PhiMode::DiscretePositive, tol);
    return lhs - rhs;
  }
  const double lhs = (1.0 - li * (1.0 / li)) * phi_direct(vals, PhiMode::DiscretePositive, tol);
  return lhs;
}

Lemma3Residuals lemma3_residuals(std::span<const double> lambdas, const IndexTuple& members,
                                 int i, int j, const Tolerances& tol) {
  return {lemma3_equal_residual(lambdas, members, i, j, tol),
          lemma3_unit_residual(lambdas, members, i, tol),
          lemma3_reciprocal_residual(lambdas, members, i, j, tol)};
}

}  // namespace zonovol
