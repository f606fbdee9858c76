#include "gpikit/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "gpikit/errors.hpp"

namespace gpikit {

namespace {

const char kVarNames[3] = {'a', 'b', 'c'};

void validate_var(int index) {
    if (index < 0 || index > 2) throw InvalidArgument("variable index must be 0, 1 or 2");
}

CovarianceMatrix<Poly3> symbolic_cov3() {
    return unit_diagonal3<Poly3>(Poly3::variable(0), Poly3::variable(1), Poly3::variable(2));
}

}  // namespace

Poly3::Poly3(long value) {
    if (value != 0) terms_[{0, 0, 0}] = Rational(value);
}

Poly3::Poly3(const Rational& value) {
    if (value != 0) terms_[{0, 0, 0}] = value;
}

Poly3 Poly3::variable(int index) {
    validate_var(index);
    Poly3 q;
    Monomial m{0, 0, 0};
    m[index] = 1;
    q.terms_[m] = 1;
    return q;
}

int Poly3::degree() const {
    if (terms_.empty()) return -1;
    const Monomial& top = terms_.rbegin()->first;
    return top[0] + top[1] + top[2];
}

Rational Poly3::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly3::add_term(const Monomial& m, const Rational& coeff) {
    if (m[0] < 0 || m[1] < 0 || m[2] < 0) throw InvalidArgument("monomial exponents must be nonnegative");
    auto [it, inserted] = terms_.try_emplace(m, coeff);
    if (!inserted) it->second += coeff;
    if (it->second == 0) terms_.erase(it);
}

Poly3& Poly3::operator+=(const Poly3& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
}

Poly3& Poly3::operator-=(const Poly3& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
    return *this;
}

Poly3 operator*(const Poly3& lhs, const Poly3& rhs) {
    Poly3 out;
    for (const auto& [ml, cl] : lhs.terms_)
        for (const auto& [mr, cr] : rhs.terms_)
            out.add_term({ml[0] + mr[0], ml[1] + mr[1], ml[2] + mr[2]}, cl * cr);
    return out;
}

Poly3& Poly3::operator*=(const Poly3& rhs) {
    *this = *this * rhs;
    return *this;
}

Poly3 Poly3::operator-() const {
    Poly3 out;
    for (const auto& [m, c] : terms_) out.terms_[m] = -c;
    return out;
}

namespace {

// Powers 0..max of each variable value, shared by all terms of an evaluation.
template <class V>
std::array<std::vector<V>, 3> power_tables(const Poly3::TermMap& terms, const V& a, const V& b, const V& c) {
    std::array<int, 3> maxe{0, 0, 0};
    for (const auto& [m, _] : terms)
        for (int v = 0; v < 3; ++v) maxe[v] = std::max(maxe[v], m[v]);
    const std::array<const V*, 3> vals{&a, &b, &c};
    std::array<std::vector<V>, 3> pows;
    for (int v = 0; v < 3; ++v) {
        pows[v].reserve(maxe[v] + 1);
        pows[v].push_back(V(1));
        for (int e = 1; e <= maxe[v]; ++e) pows[v].push_back(pows[v].back() * *vals[v]);
    }
    return pows;
}

}  // namespace

Rational Poly3::evaluate(const Rational& a, const Rational& b, const Rational& c) const {
    auto pows = power_tables<Rational>(terms_, a, b, c);
    Rational sum(0);
    for (const auto& [m, coeff] : terms_) sum += coeff * pows[0][m[0]] * pows[1][m[1]] * pows[2][m[2]];
    return sum;
}

double Poly3::evaluate(double a, double b, double c) const {
    auto pows = power_tables<double>(terms_, a, b, c);
    double sum = 0.0;
    for (const auto& [m, coeff] : terms_) sum += coeff.get_d() * pows[0][m[0]] * pows[1][m[1]] * pows[2][m[2]];
    return sum;
}

std::string Poly3::to_text() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, coeff] : terms_) {
        const bool negative = coeff < 0;
        if (first) {
            if (negative) out << '-';
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        const Rational mag = negative ? Rational(-coeff) : coeff;
        const bool constant = m[0] == 0 && m[1] == 0 && m[2] == 0;
        bool need_star = false;
        if (constant || mag != 1) {
            out << to_string(mag);
            need_star = true;
        }
        for (int v = 0; v < 3; ++v) {
            if (m[v] == 0) continue;
            if (need_star) out << '*';
            out << kVarNames[v];
            if (m[v] > 1) out << '^' << m[v];
            need_star = true;
        }
    }
    return out.str();
}

Poly3 differentiate(const Poly3& q, int var) {
    validate_var(var);
    Poly3 out;
    for (const auto& [m, coeff] : q.terms()) {
        if (m[var] == 0) continue;
        Monomial d = m;
        d[var] -= 1;
        out.add_term(d, coeff * m[var]);
    }
    return out;
}

GradientTriple gradient(const Poly3& q) {
    return {differentiate(q, 0), differentiate(q, 1), differentiate(q, 2)};
}

Poly3 permute_vars(const Poly3& q, const std::array<int, 3>& perm) {
    for (int v : perm) validate_var(v);
    if (perm[0] == perm[1] || perm[0] == perm[2] || perm[1] == perm[2])
        throw InvalidArgument("variable permutation must be a bijection");
    Poly3 out;
    for (const auto& [m, coeff] : q.terms()) {
        Monomial t{0, 0, 0};
        for (int v = 0; v < 3; ++v) t[perm[v]] = m[v];
        out.add_term(t, coeff);
    }
    return out;
}

Poly3 eval_var(const Poly3& q, int var, const Rational& value) {
    validate_var(var);
    Poly3 out;
    for (const auto& [m, coeff] : q.terms()) {
        Rational scaled = coeff;
        for (int e = 0; e < m[var]; ++e) scaled *= value;
        Monomial t = m;
        t[var] = 0;
        out.add_term(t, scaled);
    }
    return out;
}

Poly3 fold_var(const Poly3& q, int src, int dst, const Rational& factor) {
    validate_var(src);
    validate_var(dst);
    if (src == dst) throw InvalidArgument("fold_var needs distinct variables");
    Poly3 out;
    for (const auto& [m, coeff] : q.terms()) {
        Rational scaled = coeff;
        for (int e = 0; e < m[src]; ++e) scaled *= factor;
        Monomial t = m;
        t[dst] += t[src];
        t[src] = 0;
        out.add_term(t, scaled);
    }
    return out;
}

std::vector<PolyTermRecord> to_records(const Poly3& q) {
    std::vector<PolyTermRecord> records;
    records.reserve(q.terms().size());
    for (const auto& [m, coeff] : q.terms())
        records.push_back({m[0], m[1], m[2], coeff.get_num().get_str(), coeff.get_den().get_str()});
    return records;
}

Poly3 phi_polynomial(const ExponentVector& p) {
    validate_exponents(p, 3);
    if (total_degree(p) > kPhiDegreeCap)
        throw DegreeTooLarge("p1+p2+p3 exceeds the polynomial construction cap 40");
    return MomentEngine<Poly3>(symbolic_cov3()).moment(p);
}

Poly3 twoD_phi(int p1, int p2) {
    ExponentVector p{p1, p2};
    validate_exponents(p, 2);
    if (p1 + p2 > kPhiDegreeCap)
        throw DegreeTooLarge("p1+p2 exceeds the polynomial construction cap 40");
    CovarianceMatrix<Poly3> cov = CovarianceMatrix<Poly3>::identity(2);
    cov.set(0, 1, Poly3::variable(0));
    return MomentEngine<Poly3>(cov).moment(p);
}

IdentityReport make_report(std::vector<IdentityCheck> checks) {
    IdentityReport report;
    report.pass = true;
    for (auto& check : checks) {
        check.pass = check.residual.is_zero();
        report.pass = report.pass && check.pass;
    }
    report.checks = std::move(checks);
    return report;
}

namespace {

ExponentVector reduced(const ExponentVector& p, int i, int j) {
    ExponentVector q = p;
    q[i] -= 1;
    q[j] -= 1;
    return q;
}

// Off-diagonal variable index for the coordinate pair: (1,2)->a, (1,3)->b, (2,3)->c.
int var_of_pair(int i, int j) {
    return i + j - 1;
}

}  // namespace

IdentityReport check_derivative_identity(const ExponentVector& p) {
    validate_exponents(p, 3);
    const Poly3 phi = phi_polynomial(p);
    // Each variable pairs two coordinates: a ~ (1,2), b ~ (1,3), c ~ (2,3).
    const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    std::vector<IdentityCheck> checks;
    for (int var = 0; var < 3; ++var) {
        const auto [i, j] = pairs[var];
        Poly3 rhs;
        if (p[i] > 0 && p[j] > 0)
            rhs = Poly3(static_cast<long>(p[i]) * p[j]) * phi_polynomial(reduced(p, i, j));
        std::ostringstream name;
        name << "d/d" << kVarNames[var] << " Phi == p" << i + 1 << "*p" << j + 1 << "*Phi(p-e" << i + 1
             << "-e" << j + 1 << ")";
        checks.push_back({name.str(), differentiate(phi, var) - rhs, false});
    }
    return make_report(std::move(checks));
}

IdentityCheck stein_reduction_check(const ExponentVector& p, int coordinate) {
    validate_exponents(p, 3);
    if (coordinate < 0 || coordinate > 2) throw InvalidArgument("coordinate must be 0, 1 or 2");
    if (p[coordinate] < 2) throw InvalidArgument("stein reduction needs p_i >= 2");

    const Poly3 phi = phi_polynomial(p);
    const int pi = p[coordinate];

    ExponentVector twice = p;
    twice[coordinate] -= 2;
    Poly3 rhs = Poly3(static_cast<long>(pi) * (pi - 1)) * phi_polynomial(twice);
    for (int j = 0; j < 3; ++j) {
        if (j == coordinate) continue;
        const int var = var_of_pair(std::min(coordinate, j), std::max(coordinate, j));
        rhs += Poly3::variable(var) * differentiate(phi, var);
    }

    std::ostringstream name;
    name << "p" << coordinate + 1 << "*Phi == p" << coordinate + 1 << "*(p" << coordinate + 1
         << "-1)*Phi(p-2e" << coordinate + 1 << ") + cross terms";
    return {name.str(), Poly3(static_cast<long>(pi)) * phi - rhs, false};
}

IdentityReport check_stein_reduction(const ExponentVector& p) {
    validate_exponents(p, 3);
    std::vector<IdentityCheck> checks;
    for (int i = 0; i < 3; ++i)
        if (p[i] >= 2) checks.push_back(stein_reduction_check(p, i));
    return make_report(std::move(checks));
}

IdentityReport check_edge_reduction(const ExponentVector& p) {
    validate_exponents(p, 3);
    const Poly3 phi = phi_polynomial(p);
    const Poly3 twod = twoD_phi(p[0], p[1] + p[2]);

    // c = 1 forces b = a (PSD) and X3 = X2, so Phi collapses to the 2-D moment.
    Poly3 plus_edge = fold_var(eval_var(phi, 2, 1), 1, 0, 1);
    // c = -1 forces b = -a and X3 = -X2, picking up (-1)^p3.
    Poly3 minus_edge = fold_var(eval_var(phi, 2, -1), 1, 0, -1);
    const long sign = (p[2] % 2 == 0) ? 1 : -1;

    std::vector<IdentityCheck> checks;
    checks.push_back({"Phi(a,a,1) == twoD_phi(p1,p2+p3)", plus_edge - twod, false});
    checks.push_back(
        {"Phi(a,-a,-1) == (-1)^p3 * twoD_phi(p1,p2+p3)", minus_edge - Poly3(sign) * twod, false});
    return make_report(std::move(checks));
}

IdentityCheck check_ipp_identity(const ExponentVector& m, int i) {
    validate_exponents(m, 3);
    if (i < 0 || i > 2) throw InvalidArgument("coordinate must be 0, 1 or 2");
    const auto cov = symbolic_cov3();

    ExponentVector lifted = m;
    lifted[i] += 1;
    const Poly3 lhs = wick_bruteforce(cov, lifted);

    Poly3 rhs;
    for (int j = 0; j < 3; ++j) {
        if (m[j] == 0) continue;
        ExponentVector dropped = m;
        dropped[j] -= 1;
        rhs += Poly3(static_cast<long>(m[j])) * cov(i, j) * wick_bruteforce(cov, dropped);
    }

    std::ostringstream name;
    name << "E[X" << i + 1 << "*x^(" << m[0] << "," << m[1] << "," << m[2]
         << ")] == sum_j s_" << i + 1 << "j * m_j * E[x^(m-e_j)]";
    return {name.str(), lhs - rhs, false};
}

}  // namespace gpikit
