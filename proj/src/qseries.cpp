#include "mfring/qseries.hpp"

#include <algorithm>
#include <sstream>

namespace mfring {

// ---------------------------------------------------------------------------
// basic series helpers
// ---------------------------------------------------------------------------

bool QSeriesQ::is_zero() const {
    for (const auto& c : a)
        if (c != 0)
            return false;
    return true;
}

long QSeriesQ::leading_exponent() const {
    for (std::size_t n = 0; n < a.size(); ++n)
        if (a[n] != 0)
            return static_cast<long>(n);
    return -1;
}

bool QSeriesFp::is_zero() const {
    for (long c : a)
        if (c != 0)
            return false;
    return true;
}

long QSeriesFp::leading_exponent() const {
    for (std::size_t n = 0; n < a.size(); ++n)
        if (a[n] != 0)
            return static_cast<long>(n);
    return -1;
}

QSeriesQ qq_one(long prec) {
    QSeriesQ f(prec);
    f.a[0] = 1;
    return f;
}

QSeriesQ qq_monomial(long n, const Rational& c, long prec) {
    QSeriesQ f(prec);
    if (n <= prec)
        f.a[static_cast<std::size_t>(n)] = c;
    return f;
}

QSeriesFp fp_one(long prec, long p) {
    QSeriesFp f(prec, p);
    f.a[0] = 1;
    return f;
}

static long min_prec(long a, long b) { return a < b ? a : b; }

QSeriesQ series_add(const QSeriesQ& f, const QSeriesQ& g) {
    QSeriesQ h(min_prec(f.prec(), g.prec()));
    for (long n = 0; n <= h.prec(); ++n)
        h.a[n] = f.a[n] + g.a[n];
    return h;
}

QSeriesQ series_sub(const QSeriesQ& f, const QSeriesQ& g) {
    QSeriesQ h(min_prec(f.prec(), g.prec()));
    for (long n = 0; n <= h.prec(); ++n)
        h.a[n] = f.a[n] - g.a[n];
    return h;
}

QSeriesQ series_mul(const QSeriesQ& f, const QSeriesQ& g) {
    const long t = min_prec(f.prec(), g.prec());
    QSeriesQ h(t);
    for (long i = 0; i <= t; ++i) {
        if (f.a[i] == 0)
            continue;
        for (long j = 0; i + j <= t; ++j) {
            if (g.a[j] != 0)
                h.a[i + j] += f.a[i] * g.a[j];
        }
    }
    return h;
}

QSeriesQ series_scale(const QSeriesQ& f, const Rational& c) {
    QSeriesQ h(f.prec());
    for (long n = 0; n <= h.prec(); ++n)
        h.a[n] = f.a[n] * c;
    return h;
}

QSeriesQ series_truncate(const QSeriesQ& f, long prec) {
    if (prec >= f.prec())
        return f;
    QSeriesQ h(prec);
    std::copy(f.a.begin(), f.a.begin() + prec + 1, h.a.begin());
    return h;
}

QSeriesQ series_pow(const QSeriesQ& f, long e) {
    if (e < 0)
        throw PreconditionError("series_pow: negative exponent");
    QSeriesQ result = qq_one(f.prec());
    QSeriesQ base = f;
    while (e > 0) {
        if (e & 1)
            result = series_mul(result, base);
        e >>= 1;
        if (e > 0)
            base = series_mul(base, base);
    }
    return result;
}

QSeriesQ series_inverse(const QSeriesQ& f) {
    if (f.a[0] == 0)
        throw PreconditionError("series_inverse: constant term is zero");
    const long t = f.prec();
    QSeriesQ g(t);
    const Rational c0inv = Rational(1) / f.a[0];
    g.a[0] = c0inv;
    for (long n = 1; n <= t; ++n) {
        Rational s(0);
        for (long j = 1; j <= n; ++j)
            if (f.a[j] != 0)
                s += f.a[j] * g.a[n - j];
        g.a[n] = -s * c0inv;
    }
    return g;
}

QSeriesQ series_shift(const QSeriesQ& f, long n) {
    if (n < 0)
        throw PreconditionError("series_shift: negative shift");
    QSeriesQ h(f.prec());
    for (long i = 0; i + n <= f.prec(); ++i)
        h.a[i + n] = f.a[i];
    return h;
}

static void check_same_p(const QSeriesFp& f, const QSeriesFp& g) {
    if (f.p != g.p)
        throw PreconditionError("QSeriesFp: mixed moduli " + std::to_string(f.p) +
                                " and " + std::to_string(g.p));
}

QSeriesFp series_add(const QSeriesFp& f, const QSeriesFp& g) {
    check_same_p(f, g);
    QSeriesFp h(min_prec(f.prec(), g.prec()), f.p);
    for (long n = 0; n <= h.prec(); ++n)
        h.a[n] = (f.a[n] + g.a[n]) % f.p;
    return h;
}

QSeriesFp series_sub(const QSeriesFp& f, const QSeriesFp& g) {
    check_same_p(f, g);
    QSeriesFp h(min_prec(f.prec(), g.prec()), f.p);
    for (long n = 0; n <= h.prec(); ++n)
        h.a[n] = (f.a[n] - g.a[n] + f.p) % f.p;
    return h;
}

QSeriesFp series_mul(const QSeriesFp& f, const QSeriesFp& g) {
    check_same_p(f, g);
    const long t = min_prec(f.prec(), g.prec());
    QSeriesFp h(t, f.p);
    for (long i = 0; i <= t; ++i) {
        if (f.a[i] == 0)
            continue;
        for (long j = 0; i + j <= t; ++j)
            if (g.a[j] != 0)
                h.a[i + j] = (h.a[i + j] + f.a[i] * g.a[j]) % f.p;
    }
    return h;
}

QSeriesFp series_scale(const QSeriesFp& f, long c) {
    QSeriesFp h(f.prec(), f.p);
    c %= f.p;
    if (c < 0)
        c += f.p;
    for (long n = 0; n <= h.prec(); ++n)
        h.a[n] = (f.a[n] * c) % f.p;
    return h;
}

QSeriesFp series_truncate(const QSeriesFp& f, long prec) {
    if (prec >= f.prec())
        return f;
    QSeriesFp h(prec, f.p);
    std::copy(f.a.begin(), f.a.begin() + prec + 1, h.a.begin());
    return h;
}

QSeriesFp series_pow(const QSeriesFp& f, long e) {
    if (e < 0)
        throw PreconditionError("series_pow: negative exponent");
    QSeriesFp result = fp_one(f.prec(), f.p);
    QSeriesFp base = f;
    while (e > 0) {
        if (e & 1)
            result = series_mul(result, base);
        e >>= 1;
        if (e > 0)
            base = series_mul(base, base);
    }
    return result;
}

// ---------------------------------------------------------------------------
// classical series
// ---------------------------------------------------------------------------

QSeriesQ eisenstein(int k, long prec) {
    if (k < 2 || k % 2 != 0)
        throw PreconditionError("eisenstein: weight must be even and >= 2");
    // E_k = 1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^n
    const Rational c = Rational(-2 * k) / bernoulli(k);
    QSeriesQ f(prec);
    f.a[0] = 1;
    // sigma accumulation: for each d, add d^{k-1} to all multiples of d.
    std::vector<Integer> sigma(static_cast<std::size_t>(prec) + 1, Integer(0));
    for (long d = 1; d <= prec; ++d) {
        Integer dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d),
                      static_cast<unsigned long>(k - 1));
        for (long n = d; n <= prec; n += d)
            sigma[n] += dk;
    }
    for (long n = 1; n <= prec; ++n)
        f.a[n] = c * Rational(sigma[n]);
    return f;
}

QSeriesQ delta_series(long prec) {
    const QSeriesQ e4 = eisenstein(4, prec);
    const QSeriesQ e6 = eisenstein(6, prec);
    QSeriesQ num = series_sub(series_pow(e4, 3), series_mul(e6, e6));
    return series_scale(num, Rational(1, 1728));
}

QSeriesQ euler_product(long d, long prec) {
    if (d < 1)
        throw PreconditionError("euler_product: d must be positive");
    QSeriesQ f(prec);
    f.a[0] = 1;
    // prod (1 - q^{dn}) = sum_{k in Z} (-1)^k q^{d k(3k-1)/2}
    for (long k = 1;; ++k) {
        const long g1 = d * (k * (3 * k - 1)) / 2;
        const long g2 = d * (k * (3 * k + 1)) / 2;
        if (g1 > prec && g2 > prec)
            break;
        const long sign = (k % 2 == 0) ? 1 : -1;
        if (g1 <= prec)
            f.a[g1] += sign;
        if (g2 <= prec)
            f.a[g2] += sign;
    }
    return f;
}

// Ligozat-Gordon-Newman conditions for an eta quotient of level N.
static std::string eta_quotient_problem(long N, const std::map<long, long>& exponents) {
    long sum_r = 0;
    Rational ord_inf(0);
    long sum_d_r = 0, sum_Nd_r = 0;
    Rational prod_check(1);
    for (const auto& [d, r] : exponents) {
        if (r == 0)
            continue;
        if (d < 1 || N % d != 0)
            return "exponent key " + std::to_string(d) + " is not a divisor of N";
        sum_r += r;
        sum_d_r += d * r;
        sum_Nd_r += (N / d) * r;
        for (long i = 0; i < (r > 0 ? r : -r); ++i)
            prod_check *= (r > 0 ? Rational(d) : Rational(1, d));
    }
    if (sum_r % 2 != 0 || sum_r < 0)
        return "weight (1/2) sum r_d is not a nonnegative integer";
    if (sum_d_r % 24 != 0)
        return "sum d*r_d not divisible by 24";
    if (sum_Nd_r % 24 != 0)
        return "sum (N/d)*r_d not divisible by 24";
    // trivial nebentypus: (-1)^k * prod d^{r_d} must be a rational square
    Rational s = prod_check;
    if ((sum_r / 2) % 2 != 0)
        s = -s;
    if (sgn(s) < 0)
        return "character is not trivial (negative discriminant)";
    Integer num = s.get_num(), den = s.get_den();
    Integer root;
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0 ||
        mpz_perfect_square_p(den.get_mpz_t()) == 0)
        return "character is not trivial (prod d^{r_d} not a square)";
    // order at every cusp c | N must be nonnegative
    for (long c : divisors(N)) {
        Rational ord(0);
        for (const auto& [d, r] : exponents) {
            if (r == 0)
                continue;
            const long g = gcd_long(c, d);
            Rational term(g * g * r, d);
            term.canonicalize(); // mpq_class(num, den) does not reduce
            ord += term;
        }
        if (sgn(ord) < 0)
            return "negative order at the cusp for divisor " + std::to_string(c);
    }
    if (sum_d_r < 0)
        return "negative leading exponent";
    return "";
}

bool eta_quotient_is_valid(long N, const std::map<long, long>& exponents) {
    return eta_quotient_problem(N, exponents).empty();
}

QSeriesQ eta_quotient(long N, const std::map<long, long>& exponents, long prec) {
    const std::string problem = eta_quotient_problem(N, exponents);
    if (!problem.empty())
        throw PreconditionError("eta_quotient: " + problem);
    long sum_d_r = 0;
    for (const auto& [d, r] : exponents)
        sum_d_r += d * r;
    const long e0 = sum_d_r / 24; // leading exponent
    QSeriesQ f = qq_one(prec);
    for (const auto& [d, r] : exponents) {
        if (r == 0)
            continue;
        QSeriesQ base = euler_product(d, prec);
        if (r < 0)
            base = series_inverse(base);
        f = series_mul(f, series_pow(base, r > 0 ? r : -r));
    }
    return series_shift(f, e0);
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

QSeriesQ v_operator(const QSeriesQ& f, long d) {
    if (d < 1)
        throw PreconditionError("v_operator: d must be positive");
    QSeriesQ h(f.prec());
    for (long n = 0; n * d <= f.prec(); ++n)
        h.a[n * d] = f.a[n];
    return h;
}

QSeriesFp v_operator(const QSeriesFp& f, long d) {
    if (d < 1)
        throw PreconditionError("v_operator: d must be positive");
    QSeriesFp h(f.prec(), f.p);
    for (long n = 0; n * d <= f.prec(); ++n)
        h.a[n * d] = f.a[n];
    return h;
}

std::optional<QSeriesQ> undilate(const QSeriesQ& f, long d) {
    QSeriesQ h(f.prec() / d);
    for (long n = 0; n <= f.prec(); ++n) {
        if (f.a[n] == 0)
            continue;
        if (n % d != 0)
            return std::nullopt;
        h.a[n / d] = f.a[n];
    }
    return h;
}

std::optional<QSeriesFp> undilate(const QSeriesFp& f, long d) {
    QSeriesFp h(f.prec() / d, f.p);
    for (long n = 0; n <= f.prec(); ++n) {
        if (f.a[n] == 0)
            continue;
        if (n % d != 0)
            return std::nullopt;
        h.a[n / d] = f.a[n];
    }
    return h;
}

QSeriesQ hecke(const QSeriesQ& f, long ell, int k, long N) {
    if (!is_prime(ell) || N % ell == 0)
        throw PreconditionError("hecke: ell must be a prime not dividing N");
    const long t = f.prec() / ell;
    if (f.prec() < ell)
        throw PreconditionError("hecke: insufficient precision");
    Integer lk;
    mpz_ui_pow_ui(lk.get_mpz_t(), static_cast<unsigned long>(ell),
                  static_cast<unsigned long>(k - 1));
    QSeriesQ h(t);
    for (long n = 0; n <= t; ++n) {
        Rational c = f.a[n * ell];
        if (n % ell == 0)
            c += Rational(lk) * f.a[n / ell];
        h.a[n] = c;
    }
    return h;
}

QSeriesFp hecke(const QSeriesFp& f, long ell, int k, long N) {
    if (!is_prime(ell) || N % ell == 0)
        throw PreconditionError("hecke: ell must be a prime not dividing N");
    if (f.prec() < ell)
        throw PreconditionError("hecke: insufficient precision");
    const long t = f.prec() / ell;
    long lk = 1 % f.p;
    for (int i = 0; i < k - 1; ++i)
        lk = (lk * (ell % f.p)) % f.p;
    QSeriesFp h(t, f.p);
    for (long n = 0; n <= t; ++n) {
        long c = f.a[n * ell];
        if (n % ell == 0)
            c = (c + lk * f.a[n / ell]) % f.p;
        h.a[n] = c;
    }
    return h;
}

QSeriesQ serre_derivative(const QSeriesQ& f, int k) {
    QSeriesQ theta(f.prec());
    for (long n = 1; n <= f.prec(); ++n)
        theta.a[n] = Rational(n) * f.a[n];
    const QSeriesQ e2 = eisenstein(2, f.prec());
    Rational scale(k, 12);
    scale.canonicalize(); // mpq_class(num, den) does not reduce
    return series_sub(theta, series_scale(series_mul(e2, f), scale));
}

QSeriesFp reduce_mod_p(const QSeriesQ& f, long p) {
    if (!is_prime(p))
        throw PreconditionError("reduce_mod_p: modulus must be prime");
    QSeriesFp h(f.prec(), p);
    Integer zp(p);
    for (long n = 0; n <= f.prec(); ++n) {
        const Integer& den = f.a[n].get_den();
        if (mpz_divisible_p(den.get_mpz_t(), zp.get_mpz_t()))
            throw PreconditionError("reduce_mod_p: denominator divisible by " +
                                    std::to_string(p) + " at exponent " +
                                    std::to_string(n));
        Integer num = f.a[n].get_num() % zp;
        long r = num.get_si() % p;
        if (r < 0)
            r += p;
        if (r != 0) {
            long deninv = mod_inverse(mpz_fdiv_ui(den.get_mpz_t(),
                                                  static_cast<unsigned long>(p)),
                                      p);
            r = (r * deninv) % p;
        }
        h.a[n] = r;
    }
    return h;
}

PthRootResult pth_root(const QSeriesFp& f) {
    const long p = f.p;
    PthRootResult res;
    for (long n = 0; n <= f.prec(); ++n) {
        if (f.a[n] != 0 && n % p != 0) {
            res.offending_exponent = n;
            return res;
        }
    }
    // Over the prime field the coefficient Frobenius is the identity, so the
    // root just undilates the exponents.
    QSeriesFp g(f.prec() / p, p);
    for (long n = 0; n <= g.prec(); ++n)
        g.a[n] = f.a[n * p];
    res.root = g;
    return res;
}

QSeriesFp artin_schreier_solve(long p, const QSeriesFp& s, const QSeriesFp& f,
                               const FpElement& b0) {
    if (s.p != p || f.p != p || b0.p != p)
        throw PreconditionError("artin_schreier_solve: modulus mismatch");
    if (s.is_zero()) {
        PthRootResult r = pth_root(f);
        if (!r.root)
            throw PreconditionError(
                "artin_schreier_solve: s = 0 and f is not a p-th power (exponent " +
                std::to_string(r.offending_exponent) + ")");
        if (r.root->a[0] != b0.r)
            throw PreconditionError("artin_schreier_solve: b0 incompatible with root");
        return *r.root;
    }
    if (s.a[0] == 0)
        throw PreconditionError("artin_schreier_solve: s must have unit constant term");
    const long t = min_prec(s.prec(), f.prec());
    // u = s^{p-1}
    QSeriesFp u = series_pow(series_truncate(s, t), p - 1);
    // constant-term compatibility: b0^p - u0 b0 = f0
    long lhs = 1;
    for (int i = 0; i < p; ++i)
        lhs = (lhs * b0.r) % p;
    lhs = ((lhs - u.a[0] * b0.r) % p + p) % p;
    if (lhs != f.a[0] % p)
        throw PreconditionError("artin_schreier_solve: constant term incompatibility");
    QSeriesFp y(t, p);
    y.a[0] = b0.r;
    const long u0inv = mod_inverse(u.a[0], p);
    for (long n = 1; n <= t; ++n) {
        // equation at exponent n:  [p|n] y_{n/p} - sum_j u_j y_{n-j} = f_n
        long acc = 0;
        if (n % p == 0)
            acc = y.a[n / p];
        for (long j = 1; j <= n; ++j)
            if (u.a[j] != 0)
                acc = (acc - u.a[j] * y.a[n - j]) % p;
        acc = ((acc - f.a[n]) % p + p) % p;
        y.a[n] = (acc * u0inv) % p;
    }
    return y;
}

// ---------------------------------------------------------------------------
// echelon bases
// ---------------------------------------------------------------------------

bool EchelonBasisFp::insert(const QSeriesFp& f) {
    if (rows.empty()) {
        p = f.p;
        prec = f.prec();
    } else {
        check_same_p(rows[0], f);
        if (f.prec() < prec) {
            prec = f.prec();
            for (auto& row : rows)
                row = series_truncate(row, prec);
        }
    }
    QSeriesFp r = reduce(series_truncate(f, prec));
    const long piv = r.leading_exponent();
    if (piv < 0)
        return false;
    r = series_scale(r, mod_inverse(r.a[piv], p));
    // clear the new pivot column in the existing rows
    for (auto& row : rows) {
        const long c = row.a[piv];
        if (c != 0)
            row = series_sub(row, series_scale(r, c));
    }
    const auto it = std::upper_bound(pivots.begin(), pivots.end(), piv);
    const std::size_t idx = static_cast<std::size_t>(it - pivots.begin());
    pivots.insert(it, piv);
    rows.insert(rows.begin() + idx, std::move(r));
    return true;
}

QSeriesFp EchelonBasisFp::reduce(const QSeriesFp& f, std::vector<long>* coords) const {
    if (coords)
        coords->assign(rows.size(), 0);
    QSeriesFp r = series_truncate(f, prec < 0 ? f.prec() : min_prec(prec, f.prec()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (pivots[i] > r.prec())
            break;
        const long c = r.a[pivots[i]];
        if (c != 0) {
            r = series_sub(r, series_scale(series_truncate(rows[i], r.prec()), c));
            if (coords)
                (*coords)[i] = c;
        }
    }
    return r;
}

bool EchelonBasisFp::contains(const QSeriesFp& f) const {
    return reduce(f).is_zero();
}

std::optional<std::vector<long>> EchelonBasisFp::express(const QSeriesFp& f) const {
    std::vector<long> coords;
    if (!reduce(f, &coords).is_zero())
        return std::nullopt;
    return coords;
}

EchelonBasisFp echelonize(const std::vector<QSeriesFp>& in) {
    EchelonBasisFp basis;
    for (const auto& f : in)
        basis.insert(f);
    return basis;
}

bool EchelonBasisQ::insert(const QSeriesQ& f) {
    if (rows.empty()) {
        prec = f.prec();
    } else if (f.prec() < prec) {
        prec = f.prec();
        for (auto& row : rows)
            row = series_truncate(row, prec);
    }
    QSeriesQ r = reduce(series_truncate(f, prec));
    const long piv = r.leading_exponent();
    if (piv < 0)
        return false;
    r = series_scale(r, Rational(1) / r.a[piv]);
    for (auto& row : rows) {
        const Rational c = row.a[piv];
        if (c != 0)
            row = series_sub(row, series_scale(r, c));
    }
    const auto it = std::upper_bound(pivots.begin(), pivots.end(), piv);
    const std::size_t idx = static_cast<std::size_t>(it - pivots.begin());
    pivots.insert(it, piv);
    rows.insert(rows.begin() + idx, std::move(r));
    return true;
}

QSeriesQ EchelonBasisQ::reduce(const QSeriesQ& f, std::vector<Rational>* coords) const {
    if (coords)
        coords->assign(rows.size(), Rational(0));
    QSeriesQ r = series_truncate(f, prec < 0 ? f.prec() : min_prec(prec, f.prec()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (pivots[i] > r.prec())
            break;
        const Rational c = r.a[pivots[i]];
        if (c != 0) {
            r = series_sub(r, series_scale(series_truncate(rows[i], r.prec()), c));
            if (coords)
                (*coords)[i] = c;
        }
    }
    return r;
}

std::optional<std::vector<Rational>> EchelonBasisQ::express(const QSeriesQ& f) const {
    std::vector<Rational> coords;
    if (!reduce(f, &coords).is_zero())
        return std::nullopt;
    return coords;
}

EchelonBasisQ echelonize(const std::vector<QSeriesQ>& in) {
    EchelonBasisQ basis;
    for (const auto& f : in)
        basis.insert(f);
    return basis;
}

long sturm_bound(int k, long N) {
    if (k < 0 || N < 1)
        throw PreconditionError("sturm_bound: need k >= 0 and N >= 1");
    return static_cast<long>(k) * dedekind_psi(N) / 12;
}

std::string to_sparse_string(const QSeriesFp& f) {
    std::ostringstream os;
    bool first = true;
    for (long n = 0; n <= f.prec(); ++n) {
        if (f.a[n] == 0)
            continue;
        if (!first)
            os << ' ';
        os << n << ':' << f.a[n];
        first = false;
    }
    if (first)
        os << '0';
    return os.str();
}

} // namespace mfring
