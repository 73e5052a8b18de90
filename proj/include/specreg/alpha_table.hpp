#ifndef SPECREG_ALPHA_TABLE_HPP
#define SPECREG_ALPHA_TABLE_HPP

// Integer weights alpha^{(nu)}_{s, k_1..k_nu} attached to ordered derivative
// compositions in the closed-form reconstruction of the branch-1 series
// coefficients.  Defined by
//
//   alpha^{(1)}_{s, k} = 1,
//   alpha^{(nu)}_{s, k_1..k_nu}
//     = sum_{j = k_nu + 1}^{s - 2(nu-1) - (k_1+..+k_{nu-1})}
//         C(s - 2(nu-1) - (k_1+..+k_{nu-2}) - j, k_{nu-1})
//         * alpha^{(nu-1)}_{s, k_1..k_{nu-2}, j}.
//
// A composition (k_1..k_nu) of nonnegative integers is admissible when
// k_1+..+k_nu <= s + 1 - 2 nu.

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace specreg {

inline mpz_class binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return mpz_class(0);
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return out;
}

class AlphaTable {
 public:
  AlphaTable() = default;
  explicit AlphaTable(int s) : s_(s) {}

  int s() const { return s_; }

  static bool admissible(int s, const std::vector<int>& ks) {
    if (ks.empty()) return false;
    long sum = 0;
    for (int k : ks) {
      if (k < 0) return false;
      sum += k;
    }
    return sum <= s + 1 - 2 * static_cast<long>(ks.size());
  }

  const mpz_class& weight(const std::vector<int>& ks) {
    auto it = cache_.find(ks);
    if (it != cache_.end()) return it->second;
    mpz_class v = compute(ks);
    return cache_.emplace(ks, std::move(v)).first->second;
  }

  // All admissible compositions of length nu, lexicographic.
  std::vector<std::vector<int>> compositions(int nu) const {
    std::vector<std::vector<int>> out;
    long budget = s_ + 1 - 2 * static_cast<long>(nu);
    if (nu < 1 || budget < 0) return out;
    std::vector<int> cur(nu, 0);
    enumerate(0, budget, cur, out);
    return out;
  }

 private:
  int s_ = 0;
  std::map<std::vector<int>, mpz_class> cache_;

  void enumerate(int pos, long budget, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) const {
    if (pos == static_cast<int>(cur.size())) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= budget; ++k) {
      cur[pos] = k;
      enumerate(pos + 1, budget - k, cur, out);
    }
    cur[pos] = 0;
  }

  mpz_class compute(const std::vector<int>& ks) {
    const int nu = static_cast<int>(ks.size());
    if (nu < 1) throw std::invalid_argument("empty composition");
    if (nu == 1) return mpz_class(1);
    long prefix_all = 0;
    for (int t = 0; t + 1 < nu; ++t) prefix_all += ks[t];  // k_1+..+k_{nu-1}
    long prefix_head = prefix_all - ks[nu - 2];            // k_1+..+k_{nu-2}
    long upper = s_ - 2L * (nu - 1) - prefix_all;
    mpz_class acc(0);
    std::vector<int> sub(ks.begin(), ks.end() - 2);
    sub.push_back(0);
    for (long j = ks[nu - 1] + 1; j <= upper; ++j) {
      sub.back() = static_cast<int>(j);
      acc += binomial(s_ - 2L * (nu - 1) - prefix_head - j, ks[nu - 2]) * weight(sub);
    }
    return acc;
  }
};

// Weights for a single expansion order s, admissible lengths 1..up_to_nu.
inline AlphaTable alpha_coefficients(int s, int up_to_nu) {
  AlphaTable t(s);
  for (int nu = 1; nu <= up_to_nu; ++nu)
    for (const auto& ks : t.compositions(nu)) t.weight(ks);
  return t;
}

}  // namespace specreg

#endif  // SPECREG_ALPHA_TABLE_HPP
