#pragma once

#include <map>
#include <numeric>
#include <vector>

#include "gpikit/covariance.hpp"
#include "gpikit/errors.hpp"

namespace gpikit {

/// Moment multi-index (k_1, ..., k_n); all entries nonnegative.
using ExponentVector = std::vector<int>;

inline int total_degree(const ExponentVector& k) {
    return std::accumulate(k.begin(), k.end(), 0);
}

inline void validate_exponents(const ExponentVector& k, int n) {
    if (static_cast<int>(k.size()) != n)
        throw DimensionMismatch("exponent vector length does not match covariance size");
    for (int e : k)
        if (e < 0) throw InvalidArgument("exponents must be nonnegative");
}

inline constexpr int kWickDegreeCap = 16;  // 15!! ~ 2e6 matchings

/// E[X_1^{k_1} ... X_n^{k_n}] as the sum over perfect matchings of the
/// multiset {i repeated k_i times} of the product of matched covariances.
/// Zero when |k| is odd. This is the enumeration oracle; it is deliberately
/// independent of the recursive engine below.
template <class S>
S wick_bruteforce(const CovarianceMatrix<S>& cov, const ExponentVector& k) {
    validate_exponents(k, cov.size());
    const int degree = total_degree(k);
    if (degree > kWickDegreeCap) throw DegreeTooLarge("total degree exceeds enumeration cap 16");
    if (degree % 2 != 0) return S(0);
    if (degree == 0) return S(1);

    std::vector<int> label;
    label.reserve(degree);
    for (int i = 0; i < cov.size(); ++i)
        for (int r = 0; r < k[i]; ++r) label.push_back(i);

    S total(0);
    std::vector<bool> used(label.size(), false);
    // Pair the first unused slot with every later unused slot; open >= 2 here.
    auto recurse = [&](auto&& self, int open, const S& partial) -> void {
        std::size_t first = 0;
        while (used[first]) ++first;
        used[first] = true;
        for (std::size_t j = first + 1; j < label.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            S next = partial * cov(label[first], label[j]);
            if (open == 2)
                total += next;
            else
                self(self, open - 2, next);
            used[j] = false;
        }
        used[first] = false;
    };
    recurse(recurse, degree, S(1));
    return total;
}

/// Memoized Gaussian moment recursion. Reducing the first index i with
/// k_i > 0 via integration by parts:
///   M(k) = (k_i - 1) s_ii M(k - 2e_i) + sum_{j != i} k_j s_ij M(k - e_i - e_j)
/// with M(0) = 1 and any negative index contributing zero. Equal to
/// wick_bruteforce on the common domain, with no degree cap.
///
/// The covariance is fixed per engine instance; the memo table is local to
/// each moment() invocation, so instances are safe to share across threads.
template <class S>
class MomentEngine {
  public:
    explicit MomentEngine(CovarianceMatrix<S> cov) : cov_(std::move(cov)) {}

    const CovarianceMatrix<S>& covariance() const { return cov_; }

    S moment(const ExponentVector& k) const {
        validate_exponents(k, cov_.size());
        std::map<ExponentVector, S> memo;
        ExponentVector key = k;
        return compute(key, memo);
    }

  private:
    S compute(ExponentVector& k, std::map<ExponentVector, S>& memo) const {
        int pivot = -1;
        for (std::size_t i = 0; i < k.size(); ++i)
            if (k[i] > 0) {
                pivot = static_cast<int>(i);
                break;
            }
        if (pivot < 0) return S(1);
        if (total_degree(k) % 2 != 0) return S(0);

        if (auto it = memo.find(k); it != memo.end()) return it->second;

        S acc(0);
        const int ki = k[pivot];
        if (ki >= 2) {
            k[pivot] -= 2;
            acc += S(ki - 1) * cov_(pivot, pivot) * compute(k, memo);
            k[pivot] += 2;
        }
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (static_cast<int>(j) == pivot || k[j] == 0) continue;
            const int kj = k[j];
            k[pivot] -= 1;
            k[j] -= 1;
            acc += S(kj) * cov_(pivot, static_cast<int>(j)) * compute(k, memo);
            k[pivot] += 1;
            k[j] += 1;
        }
        memo.emplace(k, acc);
        return acc;
    }

    CovarianceMatrix<S> cov_;
};

template <class S>
S moment(const CovarianceMatrix<S>& cov, const ExponentVector& k) {
    return MomentEngine<S>(cov).moment(k);
}

}  // namespace gpikit
