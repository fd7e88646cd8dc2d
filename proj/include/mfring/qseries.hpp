#pragma once

// Truncated q-expansion arithmetic over exact coefficient rings (rationals
// and prime fields), the classical generating series (Eisenstein, eta,
// Delta), Hecke and level-raising operators, p-th-root and Artin-Schreier
// root extraction, and echelon-form linear algebra.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfring/exactnum.hpp"

namespace mfring {

// ---------------------------------------------------------------------------
// Series over Q.  A series holds coefficients of q^0..q^t and is understood
// modulo q^{t+1}; t is the precision.  Binary operations return the minimum
// precision of their operands.
// ---------------------------------------------------------------------------
struct QSeriesQ {
    std::vector<Rational> a; // size = precision + 1

    QSeriesQ() = default;
    explicit QSeriesQ(long prec) : a(static_cast<std::size_t>(prec) + 1, Rational(0)) {
        if (prec < 0)
            throw PreconditionError("QSeriesQ: negative precision");
    }

    long prec() const { return static_cast<long>(a.size()) - 1; }
    const Rational& coeff(long n) const { return a[static_cast<std::size_t>(n)]; }
    bool is_zero() const;
    long leading_exponent() const; // -1 when zero
};

// Series over F_p with the modulus carried alongside the coefficients.
struct QSeriesFp {
    std::vector<long> a; // residues in [0, p)
    long p = 0;

    QSeriesFp() = default;
    QSeriesFp(long prec, long modulus)
        : a(static_cast<std::size_t>(prec) + 1, 0), p(modulus) {
        if (prec < 0)
            throw PreconditionError("QSeriesFp: negative precision");
    }

    long prec() const { return static_cast<long>(a.size()) - 1; }
    long coeff(long n) const { return a[static_cast<std::size_t>(n)]; }
    bool is_zero() const;
    long leading_exponent() const;
    bool operator==(const QSeriesFp& o) const = default;
};

// -- arithmetic over Q ------------------------------------------------------
QSeriesQ qq_one(long prec);
QSeriesQ qq_monomial(long n, const Rational& c, long prec);
QSeriesQ series_add(const QSeriesQ& f, const QSeriesQ& g);
QSeriesQ series_sub(const QSeriesQ& f, const QSeriesQ& g);
QSeriesQ series_mul(const QSeriesQ& f, const QSeriesQ& g);
QSeriesQ series_scale(const QSeriesQ& f, const Rational& c);
QSeriesQ series_truncate(const QSeriesQ& f, long prec);
QSeriesQ series_pow(const QSeriesQ& f, long e);      // e >= 0
QSeriesQ series_inverse(const QSeriesQ& f);          // unit constant term
QSeriesQ series_shift(const QSeriesQ& f, long n);    // multiply by q^n

// -- arithmetic over F_p ----------------------------------------------------
QSeriesFp fp_one(long prec, long p);
QSeriesFp series_add(const QSeriesFp& f, const QSeriesFp& g);
QSeriesFp series_sub(const QSeriesFp& f, const QSeriesFp& g);
QSeriesFp series_mul(const QSeriesFp& f, const QSeriesFp& g);
QSeriesFp series_scale(const QSeriesFp& f, long c);
QSeriesFp series_truncate(const QSeriesFp& f, long prec);
QSeriesFp series_pow(const QSeriesFp& f, long e);

// -- classical series -------------------------------------------------------

// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
QSeriesQ eisenstein(int k, long prec);

// Delta = (E_4^3 - E_6^2) / 1728 = q - 24q^2 + 252q^3 - ...
QSeriesQ delta_series(long prec);

// prod_{n>=1} (1 - q^{dn}) via the pentagonal number theorem.
QSeriesQ euler_product(long d, long prec);

// prod_{d | N} eta(q^d)^{r_d} with the q^{1/24} powers absorbed; validates
// the Ligozat-Gordon-Newman holomorphy conditions for level N first.
QSeriesQ eta_quotient(long N, const std::map<long, long>& exponents, long prec);

// Non-throwing validity check for the same conditions (used by the basis
// pool search).
bool eta_quotient_is_valid(long N, const std::map<long, long>& exponents);

// -- operators ---------------------------------------------------------------

// f(q) -> f(q^d), truncated to f's precision.
QSeriesQ v_operator(const QSeriesQ& f, long d);
QSeriesFp v_operator(const QSeriesFp& f, long d);

// Inverse dilation: requires support on multiples of d; returns g with
// g(q^d) = f, precision floor(t/d).
std::optional<QSeriesQ> undilate(const QSeriesQ& f, long d);
std::optional<QSeriesFp> undilate(const QSeriesFp& f, long d);

// Hecke operator T_ell on weight-k level-N forms, ell prime not dividing N:
// (T_ell f)_n = a_{ell n} + ell^{k-1} a_{n/ell}.  Output precision floor(t/ell).
QSeriesQ hecke(const QSeriesQ& f, long ell, int k, long N);
QSeriesFp hecke(const QSeriesFp& f, long ell, int k, long N);

// Serre derivative theta(f) - (k/12) E_2 f with theta = q d/dq, mapping
// weight-k forms to weight k+2 at the same level.
QSeriesQ serre_derivative(const QSeriesQ& f, int k);

// Coefficientwise reduction; throws PreconditionError if p divides any
// denominator.
QSeriesFp reduce_mod_p(const QSeriesQ& f, long p);

// p-th root over F_p.  Succeeds iff the support lies in p*Z; the root has
// precision floor(t/p).  On failure reports the first offending exponent.
struct PthRootResult {
    std::optional<QSeriesFp> root;
    long offending_exponent = -1;
};
PthRootResult pth_root(const QSeriesFp& f);

// Solve y^p - s^{p-1} y = f over F_p with chosen constant term b0 (which must
// satisfy b0^p - s0^{p-1} b0 = f0).  Requires s to have a unit constant term;
// s == 0 delegates to pth_root.  In characteristic 2 this is y^2 + s y = f.
QSeriesFp artin_schreier_solve(long p, const QSeriesFp& s, const QSeriesFp& f,
                               const FpElement& b0);

// -- echelon linear algebra over F_p -----------------------------------------

// Reduced row-echelon basis of a span of series: rows have leading
// coefficient 1 at strictly increasing pivot exponents, and every pivot
// column is zero in all other rows.
struct EchelonBasisFp {
    long p = 0;
    long prec = -1;
    std::vector<QSeriesFp> rows;
    std::vector<long> pivots;

    long rank() const { return static_cast<long>(rows.size()); }

    // Insert a row; returns true if the rank grew.
    bool insert(const QSeriesFp& f);

    // Residual of f after elimination; coords (if non-null) receives the
    // multipliers per basis row, so that f = sum coords[i] rows[i] + residual.
    QSeriesFp reduce(const QSeriesFp& f, std::vector<long>* coords = nullptr) const;

    bool contains(const QSeriesFp& f) const;

    // Exact coordinates of f in the basis, or nullopt when not in the span.
    std::optional<std::vector<long>> express(const QSeriesFp& f) const;
};

EchelonBasisFp echelonize(const std::vector<QSeriesFp>& rows);

// Same machinery over Q (used to assemble characteristic-zero bases).
struct EchelonBasisQ {
    long prec = -1;
    std::vector<QSeriesQ> rows;
    std::vector<long> pivots;

    long rank() const { return static_cast<long>(rows.size()); }
    bool insert(const QSeriesQ& f);
    QSeriesQ reduce(const QSeriesQ& f, std::vector<Rational>* coords = nullptr) const;
    std::optional<std::vector<Rational>> express(const QSeriesQ& f) const;
};

EchelonBasisQ echelonize(const std::vector<QSeriesQ>& rows);

// Sturm bound floor(k * psi(N) / 12): weight-k level-Gamma_0(N) forms that
// agree through this exponent are equal.
long sturm_bound(int k, long N);

// Sparse "exponent:coefficient" rendering used by the CLI and tests.
std::string to_sparse_string(const QSeriesFp& f);

} // namespace mfring
