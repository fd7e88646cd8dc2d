#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mfring/qseries.hpp"

using namespace mfring;

namespace {

QSeriesQ random_series(std::mt19937& rng, long prec) {
    QSeriesQ f(prec);
    for (long n = 0; n <= prec; ++n) {
        Rational c(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 7));
        c.canonicalize(); // mpq_class(num, den) does not reduce to lowest terms
        f.a[n] = c;
    }
    return f;
}

QSeriesFp random_series_fp(std::mt19937& rng, long prec, long p) {
    QSeriesFp f(prec, p);
    for (long n = 0; n <= prec; ++n)
        f.a[n] = static_cast<long>(rng() % p);
    return f;
}

} // namespace

TEST_CASE("ring axioms under fuzzing (Q and F_p)") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const long t = 20;
        QSeriesQ f = random_series(rng, t), g = random_series(rng, t),
                 h = random_series(rng, t);
        // associativity, commutativity, distributivity
        CHECK(series_mul(series_mul(f, g), h).a == series_mul(f, series_mul(g, h)).a);
        CHECK(series_mul(f, g).a == series_mul(g, f).a);
        CHECK(series_mul(f, series_add(g, h)).a ==
              series_add(series_mul(f, g), series_mul(f, h)).a);
        for (long p : {2L, 3L}) {
            QSeriesFp a = random_series_fp(rng, t, p), b = random_series_fp(rng, t, p),
                      c = random_series_fp(rng, t, p);
            CHECK(series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c)));
            CHECK(series_mul(a, b) == series_mul(b, a));
            CHECK(series_mul(a, series_add(b, c)) ==
                  series_add(series_mul(a, b), series_mul(a, c)));
        }
    }
}

TEST_CASE("inverse, pow, shift") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        QSeriesQ f = random_series(rng, 25);
        f.a[0] = Rational(1 + static_cast<long>(rng() % 5));
        QSeriesQ prod = series_mul(f, series_inverse(f));
        CHECK(prod.a == qq_one(25).a);
    }
    QSeriesQ f(5);
    f.a[0] = 1;
    f.a[1] = 1;
    CHECK(series_pow(f, 0).a == qq_one(5).a);
    // (1+q)^5 binomials
    QSeriesQ p5 = series_pow(f, 5);
    CHECK(p5.a[2] == 10);
    CHECK(p5.a[5] == 1);
    CHECK(series_shift(qq_one(5), 2).a[2] == 1);
    CHECK(series_shift(qq_one(5), 2).a[0] == 0);
}

TEST_CASE("Eisenstein series initial coefficients") {
    const QSeriesQ e4 = eisenstein(4, 6);
    CHECK(e4.a[0] == 1);
    CHECK(e4.a[1] == 240);
    CHECK(e4.a[2] == 2160);
    CHECK(e4.a[3] == 6720);
    const QSeriesQ e6 = eisenstein(6, 4);
    CHECK(e6.a[1] == -504);
    CHECK(e6.a[2] == -16632);
    const QSeriesQ e8 = eisenstein(8, 3);
    CHECK(e8.a[1] == 480);
    // E_4^2 = E_8 (dimension 1 in weight 8 at level 1)
    CHECK(series_mul(eisenstein(4, 40), eisenstein(4, 40)).a == eisenstein(8, 40).a);
}

TEST_CASE("Delta: two definitions agree, initial coefficients") {
    const long t = 120;
    const QSeriesQ d1 = delta_series(t);
    // q * prod (1-q^n)^24 via the pentagonal-number Euler product
    QSeriesQ d2 = series_shift(series_pow(euler_product(1, t), 24), 1);
    CHECK(d1.a == d2.a);
    CHECK(d1.a[1] == 1);
    CHECK(d1.a[2] == -24);
    CHECK(d1.a[3] == 252);
    CHECK(d1.a[4] == -1472);
    CHECK(d1.a[5] == 4830);
}

TEST_CASE("E4 and E6 are 1 mod 2 and mod 3 to precision 300") {
    const long t = 300;
    for (long p : {2L, 3L}) {
        CHECK(reduce_mod_p(eisenstein(4, t), p) == fp_one(t, p));
        CHECK(reduce_mod_p(eisenstein(6, t), p) == fp_one(t, p));
    }
}

TEST_CASE("eta quotient validity and values") {
    // eta(q)^24 at level 1 is Delta / q
    std::map<long, long> r{{1, 24}};
    CHECK(eta_quotient_is_valid(1, r));
    // an eta quotient with negative weight sum is rejected
    std::map<long, long> bad{{1, -2}};
    CHECK_FALSE(eta_quotient_is_valid(1, bad));
}

TEST_CASE("V operator and undilate round-trip") {
    std::mt19937 rng(13);
    QSeriesQ f = random_series(rng, 30);
    for (long d : {2L, 3L, 5L}) {
        QSeriesQ v = v_operator(f, d);
        auto back = undilate(v, d);
        REQUIRE(back.has_value());
        CHECK(back->a == series_truncate(f, 30 / d).a);
    }
    QSeriesQ g(4);
    g.a[1] = 1; // q not supported on 2Z
    CHECK_FALSE(undilate(g, 2).has_value());
}

TEST_CASE("Hecke operator on Delta: tau multiplicativity") {
    // T_ell Delta = tau(ell) Delta for the level-1 eigenform
    const long t = 60;
    const QSeriesQ d = delta_series(t * 7 + 7);
    for (long ell : {2L, 3L, 5L, 7L}) {
        const QSeriesQ img = hecke(d, ell, 12, 1);
        const Rational tau_ell = d.a[ell];
        CHECK(img.a == series_scale(series_truncate(d, img.prec()), tau_ell).a);
    }
}

TEST_CASE("Hecke operators commute") {
    std::mt19937 rng(17);
    QSeriesQ f = random_series(rng, 6 * 35);
    QSeriesQ a = hecke(hecke(f, 2, 4, 1), 3, 4, 1);
    QSeriesQ b = hecke(hecke(f, 3, 4, 1), 2, 4, 1);
    CHECK(a.a == b.a);
    CHECK_THROWS_AS(hecke(f, 5, 4, 5), PreconditionError); // ell | N
}

TEST_CASE("Serre derivative maps E4 into weight-6 line") {
    // The Serre derivative of E_4 is -E_6/3 (classical identity).
    const long t = 50;
    QSeriesQ d = serre_derivative(eisenstein(4, t), 4);
    CHECK(d.a == series_scale(eisenstein(6, t), Rational(-1, 3)).a);
}

TEST_CASE("reduce_mod_p rejects bad denominators") {
    QSeriesQ f(3);
    f.a[1] = Rational(1, 2);
    CHECK_THROWS_AS(reduce_mod_p(f, 2), PreconditionError);
    CHECK(reduce_mod_p(f, 3).a[1] == 2); // 1/2 = 2 mod 3
}

TEST_CASE("pth_root round-trips and reports failure exponent") {
    std::mt19937 rng(23);
    for (long p : {2L, 3L}) {
        QSeriesFp g = random_series_fp(rng, 20, p);
        // freshman's dream: g(q)^p = sum g_n^p q^{pn}, written out directly so
        // the power carries enough precision for the root to recover all of g
        QSeriesFp gp(20 * p, p);
        for (long n = 0; n <= 20; ++n)
            gp.a[p * n] = g.a[n]; // a^p = a in F_p
        auto res = pth_root(gp);
        REQUIRE(res.root.has_value());
        CHECK(*res.root == g);
    }
    QSeriesFp h(5, 2);
    h.a[3] = 1;
    auto res = pth_root(h);
    CHECK_FALSE(res.root.has_value());
    CHECK(res.offending_exponent == 3);
}

TEST_CASE("Artin-Schreier solve satisfies its equation") {
    std::mt19937 rng(29);
    for (long p : {2L, 3L}) {
        for (int trial = 0; trial < 10; ++trial) {
            QSeriesFp s = random_series_fp(rng, 30, p);
            s.a[0] = 1; // unit constant term
            QSeriesFp y = random_series_fp(rng, 30, p);
            // f = y^p - s^{p-1} y, then resolve for y from (s, f, y_0)
            QSeriesFp f = series_sub(series_pow(y, p),
                                     series_mul(series_pow(s, p - 1), y));
            QSeriesFp solved = artin_schreier_solve(p, s, f, FpElement(y.a[0], p));
            CHECK(series_truncate(solved, 30) == y);
        }
    }
}

TEST_CASE("echelon basis over F_p: pivots, reduce, express") {
    std::mt19937 rng(31);
    for (long p : {2L, 3L}) {
        EchelonBasisFp basis;
        std::vector<QSeriesFp> inserted;
        for (int i = 0; i < 12; ++i) {
            QSeriesFp f = random_series_fp(rng, 15, p);
            if (basis.insert(f))
                inserted.push_back(f);
        }
        // strictly increasing pivots, unit leading coefficients
        for (std::size_t i = 0; i + 1 < basis.pivots.size(); ++i)
            CHECK(basis.pivots[i] < basis.pivots[i + 1]);
        for (std::size_t i = 0; i < basis.rows.size(); ++i)
            CHECK(basis.rows[i].a[basis.pivots[i]] == 1);
        // every generator of the span is expressible and reduces to zero
        for (const auto& f : inserted) {
            CHECK(basis.contains(f));
            auto coords = basis.express(f);
            REQUIRE(coords.has_value());
            QSeriesFp rebuilt(15, p);
            for (std::size_t i = 0; i < basis.rows.size(); ++i)
                rebuilt = series_add(rebuilt, series_scale(basis.rows[i], (*coords)[i]));
            CHECK(rebuilt == f);
        }
    }
}

TEST_CASE("echelon basis over Q behaves identically") {
    std::mt19937 rng(37);
    EchelonBasisQ basis;
    std::vector<QSeriesQ> inserted;
    for (int i = 0; i < 10; ++i) {
        QSeriesQ f = random_series(rng, 12);
        if (basis.insert(f))
            inserted.push_back(f);
    }
    for (const auto& f : inserted) {
        auto coords = basis.express(f);
        REQUIRE(coords.has_value());
        CHECK(basis.reduce(f).is_zero());
    }
    QSeriesQ outside(12);
    outside.a[11] = Rational(1, 3);
    if (!basis.express(outside).has_value())
        CHECK_FALSE(basis.reduce(outside).is_zero());
}

TEST_CASE("sturm bound values") {
    CHECK(sturm_bound(2, 1) == 0);
    CHECK(sturm_bound(12, 1) == 1);
    CHECK(sturm_bound(2, 65) == 14);
    CHECK(sturm_bound(4, 65) == 28);
    CHECK(sturm_bound(4, 91) == 37);
    CHECK(sturm_bound(6, 91) == 56);
}

TEST_CASE("sparse rendering") {
    QSeriesFp f(10, 2);
    f.a[1] = 1;
    f.a[9] = 1;
    CHECK(to_sparse_string(f) == "1:1 9:1");
}
