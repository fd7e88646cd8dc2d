#pragma once

// Exact integer, rational and finite-field arithmetic plus the elementary
// number-theoretic functions used throughout the library.

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mfring/errors.hpp"

namespace mfring {

using Integer = mpz_class;
using Rational = mpq_class;

// Element of the prime field F_p.  The modulus travels with the value and is
// checked on every binary operation, so values from different characteristics
// can never be mixed silently.
struct FpElement {
    long r = 0; // residue in [0, p)
    long p = 0; // prime modulus

    FpElement() = default;
    FpElement(long value, long modulus);

    FpElement operator+(const FpElement& o) const;
    FpElement operator-(const FpElement& o) const;
    FpElement operator*(const FpElement& o) const;
    FpElement operator/(const FpElement& o) const;
    FpElement operator-() const;
    bool operator==(const FpElement& o) const = default;
    bool is_zero() const { return r == 0; }
};

// Prime factorization of a positive integer: (prime, exponent) pairs with
// strictly increasing primes.  N = 1 yields an empty list.
struct Factorization {
    std::vector<std::pair<long, int>> factors;

    long reconstruct() const;
    int distinct_prime_count() const { return static_cast<int>(factors.size()); }
};

Factorization factor(long n);

bool is_prime(long n);

// Standard Kronecker symbol (a/n), n != 0.
int kronecker(long a, long n);

// Dedekind psi: N * prod_{p | N} (1 + 1/p).
long dedekind_psi(long n);

// Euler totient.
long euler_phi(long n);

// Sorted list of positive divisors.
std::vector<long> divisors(long n);

// k-th Bernoulli number for even k >= 0 (B_0 = 1, B_2 = 1/6, B_4 = -1/30, ...).
Rational bernoulli(int k);

// Inverse of a mod p (p prime, a not divisible by p).
long mod_inverse(long a, long p);

long gcd_long(long a, long b);

// Exact power p^e as long (throws on overflow-scale inputs).
long pow_long(long base, int exp);

} // namespace mfring
