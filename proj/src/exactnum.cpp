#include "mfring/exactnum.hpp"

#include <algorithm>
#include <numeric>

namespace mfring {

FpElement::FpElement(long value, long modulus) : p(modulus) {
    if (modulus < 2)
        throw PreconditionError("FpElement: modulus must be a prime >= 2");
    r = value % modulus;
    if (r < 0)
        r += modulus;
}

static void check_same_modulus(const FpElement& a, const FpElement& b) {
    if (a.p != b.p)
        throw PreconditionError("FpElement: mixed moduli " + std::to_string(a.p) +
                                " and " + std::to_string(b.p));
}

FpElement FpElement::operator+(const FpElement& o) const {
    check_same_modulus(*this, o);
    return FpElement(r + o.r, p);
}

FpElement FpElement::operator-(const FpElement& o) const {
    check_same_modulus(*this, o);
    return FpElement(r - o.r, p);
}

FpElement FpElement::operator*(const FpElement& o) const {
    check_same_modulus(*this, o);
    return FpElement(r * o.r, p);
}

FpElement FpElement::operator/(const FpElement& o) const {
    check_same_modulus(*this, o);
    if (o.r == 0)
        throw PreconditionError("FpElement: division by zero");
    return FpElement(r * mod_inverse(o.r, p), p);
}

FpElement FpElement::operator-() const { return FpElement(-r, p); }

long Factorization::reconstruct() const {
    long n = 1;
    for (const auto& [p, e] : factors)
        for (int i = 0; i < e; ++i)
            n *= p;
    return n;
}

Factorization factor(long n) {
    if (n < 1)
        throw PreconditionError("factor: argument must be positive");
    Factorization f;
    for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.factors.emplace_back(p, e);
        }
    }
    if (n > 1)
        f.factors.emplace_back(n, 1);
    return f;
}

bool is_prime(long n) {
    if (n < 2)
        return false;
    for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0)
            return false;
    return true;
}

int kronecker(long a, long n) {
    if (n == 0)
        throw PreconditionError("kronecker: n must be nonzero");
    mpz_class za(static_cast<signed long>(a)), zn(static_cast<signed long>(n));
    return mpz_kronecker(za.get_mpz_t(), zn.get_mpz_t());
}

long dedekind_psi(long n) {
    long result = n;
    for (const auto& [p, e] : factor(n).factors) {
        (void)e;
        result = result / p * (p + 1);
    }
    return result;
}

long euler_phi(long n) {
    long result = n;
    for (const auto& [p, e] : factor(n).factors) {
        (void)e;
        result = result / p * (p - 1);
    }
    return result;
}

std::vector<long> divisors(long n) {
    std::vector<long> divs{1};
    for (const auto& [p, e] : factor(n).factors) {
        const std::size_t count = divs.size();
        long pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < count; ++j)
                divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

Rational bernoulli(int k) {
    if (k < 0 || k % 2 != 0)
        throw PreconditionError("bernoulli: index must be even and nonnegative");
    // B_m = -1/(m+1) * sum_{j=0}^{m-1} C(m+1, j) B_j, seeded with B_0 = 1.
    static std::vector<Rational> cache{Rational(1)};
    while (static_cast<int>(cache.size()) <= k) {
        const int m = static_cast<int>(cache.size());
        Rational sum(0);
        Integer binom(1); // C(m+1, 0)
        for (int j = 0; j < m; ++j) {
            sum += Rational(binom) * cache[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        Rational bm = -sum / Rational(m + 1);
        bm.canonicalize();
        cache.push_back(bm);
    }
    return cache[k];
}

long mod_inverse(long a, long p) {
    a %= p;
    if (a < 0)
        a += p;
    if (a == 0)
        throw PreconditionError("mod_inverse: argument divisible by modulus");
    // Extended Euclid.
    long t = 0, newt = 1, r = p, newr = a;
    while (newr != 0) {
        long q = r / newr;
        long tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1)
        throw PreconditionError("mod_inverse: modulus not coprime to argument");
    return t < 0 ? t + p : t;
}

long gcd_long(long a, long b) { return std::gcd(a, b); }

long pow_long(long base, int exp) {
    long result = 1;
    for (int i = 0; i < exp; ++i) {
        if (result > (1L << 61) / (base > 0 ? base : 1))
            throw PreconditionError("pow_long: overflow");
        result *= base;
    }
    return result;
}

} // namespace mfring
