#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "gpikit/moments.hpp"
#include "gpikit/rational.hpp"

namespace gpikit {

/// Exponents of (a, b, c).
using Monomial = std::array<int, 3>;

/// Graded lexicographic: lower total degree first, lexicographically larger
/// first within a degree. Iterating a map in this order prints
/// 1 + 2*a^2 + 2*b^2 + 2*c^2 + 8*a*b*c with a^2 before b^2 before c^2.
struct GrlexLess {
    bool operator()(const Monomial& lhs, const Monomial& rhs) const {
        const int dl = lhs[0] + lhs[1] + lhs[2];
        const int dr = rhs[0] + rhs[1] + rhs[2];
        if (dl != dr) return dl < dr;
        return lhs > rhs;
    }
};

/// Sparse multivariate polynomial in (a, b, c) with exact rational
/// coefficients. Zero coefficients are never stored; term order is canonical,
/// so equality and serialization are exact and deterministic.
class Poly3 {
  public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    Poly3() = default;
    Poly3(long value);  // NOLINT(google-explicit-constructor): ring constant
    explicit Poly3(const Rational& value);

    /// The indeterminate a (index 0), b (1) or c (2).
    static Poly3 variable(int index);

    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    const TermMap& terms() const { return terms_; }
    Rational coefficient(const Monomial& m) const;
    Rational constant_term() const { return coefficient({0, 0, 0}); }

    void add_term(const Monomial& m, const Rational& coeff);

    Poly3& operator+=(const Poly3& rhs);
    Poly3& operator-=(const Poly3& rhs);
    Poly3& operator*=(const Poly3& rhs);
    Poly3 operator-() const;

    friend Poly3 operator+(Poly3 lhs, const Poly3& rhs) { return lhs += rhs; }
    friend Poly3 operator-(Poly3 lhs, const Poly3& rhs) { return lhs -= rhs; }
    friend Poly3 operator*(const Poly3& lhs, const Poly3& rhs);
    friend bool operator==(const Poly3& lhs, const Poly3& rhs) { return lhs.terms_ == rhs.terms_; }
    friend bool operator!=(const Poly3& lhs, const Poly3& rhs) { return !(lhs == rhs); }

    Rational evaluate(const Rational& a, const Rational& b, const Rational& c) const;
    double evaluate(double a, double b, double c) const;

    /// Canonical text form: terms in graded-lex order joined by " + ",
    /// e.g. "1 + 2*a^2 + 2*b^2 + 2*c^2 + 8*a*b*c". Zero prints "0".
    std::string to_text() const;

  private:
    TermMap terms_;
};

struct GradientTriple {
    Poly3 da, db, dc;
};

/// Formal partial derivative with respect to variable 0 (a), 1 (b) or 2 (c).
Poly3 differentiate(const Poly3& q, int var);

GradientTriple gradient(const Poly3& q);

/// Relabels variables: exponent of variable v moves to perm[v].
Poly3 permute_vars(const Poly3& q, const std::array<int, 3>& perm);

/// Partial evaluation of one variable at an exact rational value.
Poly3 eval_var(const Poly3& q, int var, const Rational& value);

/// Substitutes src -> factor * dst, collapsing two variables into one.
Poly3 fold_var(const Poly3& q, int src, int dst, const Rational& factor);

/// One record per term for the JSON serialization: exponents plus the exact
/// coefficient as numerator/denominator strings (coefficients outgrow int64).
struct PolyTermRecord {
    int i, j, k;
    std::string numerator;
    std::string denominator;
};
std::vector<PolyTermRecord> to_records(const Poly3& q);

inline constexpr int kPhiDegreeCap = 40;  // p1+p2+p3 cap for Phi construction

/// Phi_p: E[X1^p1 X2^p2 X3^p3] for the unit-diagonal covariance with
/// off-diagonals (a, b, c), built exactly through the moment recursion over
/// the polynomial ring.
Poly3 phi_polynomial(const ExponentVector& p);

/// The 2-D moment polynomial E[X1^p1 X2^p2] for a unit-variance pair with
/// correlation t; returned as a univariate polynomial in the first variable.
Poly3 twoD_phi(int p1, int p2);

/// One named exact identity: pass iff the residual polynomial is zero.
struct IdentityCheck {
    std::string name;
    Poly3 residual;
    bool pass = false;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool pass = false;
};

IdentityReport make_report(std::vector<IdentityCheck> checks);

/// d/da Phi_p == p1 p2 Phi_{p-e1-e2} and the two analogues, exactly.
IdentityReport check_derivative_identity(const ExponentVector& p);

/// p_i Phi_p == p_i (p_i - 1) Phi_{p - 2e_i} + (two cross-derivative terms),
/// for every coordinate i with p_i >= 2: the integration-by-parts expansion
/// of E[X_i * x^{p - e_i}] with the derivative identity substituted.
IdentityReport check_stein_reduction(const ExponentVector& p);

/// Stein reduction in a single coordinate (0, 1 or 2); requires p[i] >= 2.
IdentityCheck stein_reduction_check(const ExponentVector& p, int coordinate);

/// On the edge c = 1 the third component collapses onto the second, so
/// Phi_p(t, t, 1) == twoD_phi(p1, p2+p3)(t); same on c = -1 via
/// Phi_p(t, -t, -1) == (-1)^p3 twoD_phi(p1, p2+p3)(t). Exact univariate
/// comparisons (the sign is +1 for the even exponents GPI cares about).
IdentityReport check_edge_reduction(const ExponentVector& p);

/// Raw integration-by-parts identity E[X_i x^m] == sum_j s_ij m_j E[x^{m-e_j}]
/// with both sides built from the matching enumeration oracle, so the check is
/// independent of the recursive engine. Requires |m| + 1 within the Wick cap.
IdentityCheck check_ipp_identity(const ExponentVector& m, int i);

}  // namespace gpikit
