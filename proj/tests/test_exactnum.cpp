#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mfring/exactnum.hpp"

using namespace mfring;

TEST_CASE("FpElement arithmetic and modulus safety") {
    FpElement a(5, 7), b(4, 7);
    CHECK((a + b).r == 2);
    CHECK((a - b).r == 1);
    CHECK((a * b).r == 6);
    CHECK((a / b).r == 3); // 3*4 = 12 = 5 mod 7
    CHECK((-a).r == 2);
    CHECK_THROWS_AS(a + FpElement(1, 5), PreconditionError);
    CHECK_THROWS_AS(a / FpElement(0, 7), PreconditionError);
    // canonicalization of negative residues
    CHECK(FpElement(-1, 7).r == 6);
}

TEST_CASE("factor round-trips and orders primes") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
        long n = 1 + static_cast<long>(rng() % 100000);
        Factorization f = factor(n);
        CHECK(f.reconstruct() == n);
        for (std::size_t i = 0; i + 1 < f.factors.size(); ++i)
            CHECK(f.factors[i].first < f.factors[i + 1].first);
        for (const auto& [p, e] : f.factors) {
            CHECK(is_prime(p));
            CHECK(e >= 1);
        }
    }
    CHECK(factor(1).factors.empty());
    CHECK_THROWS_AS(factor(0), PreconditionError);
}

TEST_CASE("is_prime agrees with trial division") {
    auto naive = [](long n) {
        if (n < 2)
            return false;
        for (long d = 2; d * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    };
    for (long n = 0; n <= 2000; ++n)
        CHECK(is_prime(n) == naive(n));
}

TEST_CASE("kronecker symbol: known values and multiplicativity") {
    // quadratic residues mod 7: 1,2,4
    CHECK(kronecker(1, 7) == 1);
    CHECK(kronecker(2, 7) == 1);
    CHECK(kronecker(3, 7) == -1);
    CHECK(kronecker(7, 7) == 0);
    CHECK(kronecker(-1, 5) == 1);  // 5 = 1 mod 4
    CHECK(kronecker(-1, 7) == -1); // 7 = 3 mod 4
    CHECK(kronecker(-3, 13) == 1); // 13 = 1 mod 3
    CHECK(kronecker(-3, 5) == -1);
    std::mt19937 rng(99);
    for (int i = 0; i < 200; ++i) {
        long a = static_cast<long>(rng() % 200) - 100;
        long b = static_cast<long>(rng() % 200) - 100;
        long n = 1 + 2 * static_cast<long>(rng() % 50); // odd positive
        CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
    }
}

TEST_CASE("dedekind psi and euler phi") {
    CHECK(dedekind_psi(1) == 1);
    CHECK(dedekind_psi(13) == 14);
    CHECK(dedekind_psi(65) == 84);
    CHECK(dedekind_psi(91) == 112);
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    // sum_{d | n} phi(d) = n
    for (long n = 1; n <= 500; ++n) {
        long s = 0;
        for (long d : divisors(n))
            s += euler_phi(d);
        CHECK(s == n);
    }
    // psi is multiplicative on coprime arguments
    CHECK(dedekind_psi(5 * 13) == dedekind_psi(5) * dedekind_psi(13));
    CHECK(dedekind_psi(7 * 13) == dedekind_psi(7) * dedekind_psi(13));
}

TEST_CASE("divisors are sorted and complete") {
    auto ds = divisors(91);
    CHECK(ds == std::vector<long>{1, 7, 13, 91});
    for (long n = 1; n <= 300; ++n) {
        long count = 0;
        for (long d = 1; d <= n; ++d)
            if (n % d == 0)
                ++count;
        CHECK(static_cast<long>(divisors(n).size()) == count);
    }
}

TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli(0) == Rational(1));
    CHECK(bernoulli(2) == Rational(1, 6));
    CHECK(bernoulli(4) == Rational(-1, 30));
    CHECK(bernoulli(6) == Rational(1, 42));
    CHECK(bernoulli(8) == Rational(-1, 30));
    CHECK(bernoulli(10) == Rational(5, 66));
    CHECK(bernoulli(12) == Rational(-691, 2730));
}

TEST_CASE("mod_inverse, gcd, pow_long") {
    for (long p : {2L, 3L, 5L, 13L, 101L})
        for (long a = 1; a < p; ++a)
            CHECK((a * mod_inverse(a, p)) % p == 1);
    CHECK(gcd_long(91, 65) == 13);
    CHECK(gcd_long(0, 5) == 5);
    CHECK(pow_long(2, 10) == 1024);
    CHECK(pow_long(3, 0) == 1);
}
