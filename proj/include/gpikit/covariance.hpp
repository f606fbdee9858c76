#pragma once

#include <utility>
#include <vector>

#include "gpikit/errors.hpp"

namespace gpikit {

/// Symmetric n x n matrix over a scalar ring S. S can be an exact rational,
/// a double, or a polynomial indeterminate; symmetry is enforced by storage.
template <class S>
class CovarianceMatrix {
  public:
    explicit CovarianceMatrix(int n) : n_(n), entries_(static_cast<std::size_t>(n) * n, S(0)) {
        if (n < 1) throw InvalidArgument("covariance size must be >= 1");
    }

    static CovarianceMatrix identity(int n) {
        CovarianceMatrix m(n);
        for (int i = 0; i < n; ++i) m.entries_[idx(m.n_, i, i)] = S(1);
        return m;
    }

    int size() const { return n_; }

    const S& operator()(int i, int j) const { return entries_[idx(n_, i, j)]; }

    void set(int i, int j, const S& value) {
        entries_[idx(n_, i, j)] = value;
        entries_[idx(n_, j, i)] = value;
    }

    CovarianceMatrix scaled(const S& factor) const {
        CovarianceMatrix m(n_);
        for (std::size_t t = 0; t < entries_.size(); ++t) m.entries_[t] = entries_[t] * factor;
        return m;
    }

    CovarianceMatrix permuted(const std::vector<int>& perm) const {
        CovarianceMatrix m(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m.entries_[idx(n_, i, j)] = (*this)(perm[i], perm[j]);
        return m;
    }

  private:
    static std::size_t idx(int n, int i, int j) {
        return static_cast<std::size_t>(i) * n + j;
    }

    int n_;
    std::vector<S> entries_;
};

/// The 3 x 3 unit-diagonal matrix with off-diagonals s12=a, s13=b, s23=c.
template <class S>
CovarianceMatrix<S> unit_diagonal3(const S& a, const S& b, const S& c) {
    auto m = CovarianceMatrix<S>::identity(3);
    m.set(0, 1, a);
    m.set(0, 2, b);
    m.set(1, 2, c);
    return m;
}

}  // namespace gpikit
