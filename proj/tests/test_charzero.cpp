#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "mfring/charzero.hpp"

using namespace mfring;

namespace {

struct FixtureEnv {
    FixtureEnv() {
        if (const char* dir = std::getenv("X0RING_FIXTURES"))
            set_fixture_directory(dir);
    }
} fixture_env;

} // namespace

TEST_CASE("elliptic point counts") {
    CHECK(epsilon2(1) == 1);
    CHECK(epsilon2(2) == 1);
    CHECK(epsilon2(4) == 0);
    CHECK(epsilon2(5) == 2);
    CHECK(epsilon2(13) == 2);
    CHECK(epsilon2(65) == 4);
    CHECK(epsilon2(91) == 0);
    CHECK(epsilon3(1) == 1);
    CHECK(epsilon3(9) == 0);
    CHECK(epsilon3(7) == 2);
    CHECK(epsilon3(13) == 2);
    CHECK(epsilon3(91) == 4);
    CHECK(epsilon3(65) == 0);
}

TEST_CASE("cusp counts and genus") {
    CHECK(cusp_count(1) == 1);
    CHECK(cusp_count(13) == 2);
    CHECK(cusp_count(65) == 4);
    CHECK(cusp_count(91) == 4);
    CHECK(genus_X0(1) == 0);
    CHECK(genus_X0(11) == 1);
    CHECK(genus_X0(13) == 0);
    CHECK(genus_X0(37) == 2);
    CHECK(genus_X0(65) == 5);
    CHECK(genus_X0(91) == 7);
    // full-level curves
    CHECK(genus_X_full(7) == 3);
    CHECK(genus_X_full(11) == 26);
}

TEST_CASE("genus formula integrality for N <= 1000") {
    // 12(g-1) + 3 eps2 + 4 eps3 + 6 cusps = psi must hold exactly, and the
    // invariants bundle asserts it internally.
    for (long N = 1; N <= 1000; ++N) {
        const CurveInvariants inv = curve_invariants(N);
        CHECK(12 * (inv.genus - 1) + 3 * inv.eps2 + 4 * inv.eps3 + 6 * inv.cusps ==
              inv.psi);
        CHECK(inv.genus >= 0);
    }
}

TEST_CASE("dimension formula against known values") {
    // level 1: the classical sequence
    long level1[] = {1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3};
    for (int k = 0; k <= 24; k += 2)
        CHECK(dimension_M(1, k) == level1[k / 2]);
    CHECK(dimension_M(13, 2) == 1); // genus 0, two cusps: Eisenstein line only
    CHECK(dimension_M(65, 2) == 8);
    CHECK(dimension_M(65, 4) == 24);
    CHECK(dimension_M(65, 6) == 36);
    CHECK(dimension_M(91, 2) == 10);
    CHECK(dimension_M(91, 4) == 30);
    CHECK(dimension_M(91, 6) == 50);
    CHECK(dimension_M(13, 4) == 5);
    CHECK(dimension_M(13, 6) == 7);
}

TEST_CASE("Victor Miller basis at level 1") {
    // weight 12: echelon basis is {E_4^3 - 720 Delta-ish combination}; check
    // directly that rows have pivots 0 and 1 and integer coefficients.
    SpaceBasis b = get_basis(1, 12, 20);
    REQUIRE(b.forms.size() == 2);
    CHECK(b.forms[0].a[0] == 1);
    CHECK(b.forms[0].a[1] == 0);
    CHECK(b.forms[1].a[0] == 0);
    CHECK(b.forms[1].a[1] == 1);
    // second row is Delta
    CHECK(b.forms[1].a == delta_series(20).a);
    // first row is E_4^3 - 720 Delta = 1 + 196560 q^2 + ... (theta-series of
    // the Leech lattice appears at weight 12)
    CHECK(b.forms[0].a[2] == 196560);
}

TEST_CASE("ladder forms") {
    const QSeriesQ l2 = ladder_form(2, 10);
    CHECK(l2.a[0] == -1);  // 1 - d
    CHECK(l2.a[1] == -24); // E_2 = 1 - 24q - ...
    CHECK(l2.a[2] == -24 * 3 + 2 * 24);
    const QSeriesQ l5 = ladder_form(5, 10);
    CHECK(l5.a[0] == -4);
    CHECK(l5.a[1] == -24);
}

TEST_CASE("generated bases are certified: rank equals dimension formula") {
    for (long N : {5L, 7L, 13L, 26L}) {
        for (int k : {2, 4, 6}) {
            const long t = sturm_bound(k, N) + 5;
            SpaceBasis b = get_basis(N, k, t);
            CHECK(static_cast<long>(b.forms.size()) == dimension_M(N, k));
            // echelon structure: strictly increasing leading exponents
            for (std::size_t i = 0; i + 1 < b.forms.size(); ++i)
                CHECK(b.forms[i].leading_exponent() < b.forms[i + 1].leading_exponent());
            // primitive integer rows (denominator 1 everywhere)
            for (const auto& f : b.forms)
                for (const auto& c : f.a)
                    CHECK(c.get_den() == 1);
        }
    }
}

TEST_CASE("basis rows are closed under Hecke operators") {
    const long N = 13;
    const int k = 4;
    const long t = 30;
    SpaceBasis b = get_basis(N, k, t * 2 + 2);
    EchelonBasisQ span;
    for (const auto& f : b.forms)
        span.insert(series_truncate(f, t));
    for (const auto& f : b.forms) {
        QSeriesQ img = series_truncate(hecke(f, 2, k, N), t);
        CHECK(span.reduce(img).is_zero());
    }
}

TEST_CASE("precondition and failure modes") {
    CHECK_THROWS_AS(build_basis(0, 4, 10), PreconditionError);
    CHECK_THROWS_AS(build_basis(5, 3, 10), PreconditionError);
    CHECK_THROWS_AS(build_basis(65, 4, 3), PreconditionError); // below Sturm
    CHECK_THROWS_AS(dimension_M(5, -2), PreconditionError);
}

TEST_CASE("fixture loader rejects malformed files") {
    CHECK_THROWS_AS(load_fixture("/nonexistent/basis_5_4.txt"), FixtureError);
}

TEST_CASE("fixture loader parses a well-formed level-65 weight-2 file") {
    const char* dir = std::getenv("X0RING_FIXTURES");
    REQUIRE(dir != nullptr);
    SpaceBasis b = load_fixture(std::string(dir) + "/basis_65_2.txt");
    CHECK(b.N == 65);
    CHECK(b.k == 2);
    CHECK(b.t == 40);
    CHECK(b.forms.size() == 8);
    CHECK(b.provenance == SpaceBasis::Provenance::fixture);
    // must agree with the independently generated basis
    SpaceBasis gen = get_basis(65, 2, 40);
    REQUIRE(gen.forms.size() == 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (long n = 0; n <= 40; ++n)
            CHECK(b.forms[i].a[n] == gen.forms[i].a[n]);
}

TEST_CASE("make_primitive") {
    QSeriesQ f(4);
    f.a[1] = Rational(2, 3);
    f.a[3] = Rational(4, 3);
    QSeriesQ g = make_primitive(f);
    CHECK(g.a[1] == 1);
    CHECK(g.a[3] == 2);
    QSeriesQ neg(2);
    neg.a[0] = -5;
    CHECK(make_primitive(neg).a[0] == 1);
}

TEST_CASE("rational nullspace") {
    // rows of a rank-2 matrix in 4 columns -> kernel of dimension 2
    std::vector<std::vector<Rational>> rows = {
        {1, 2, 3, 4},
        {2, 4, 6, 8},
        {0, 1, 1, 0},
    };
    auto ker = rational_nullspace(rows, 4);
    CHECK(ker.size() == 2);
    for (const auto& v : ker)
        for (const auto& row : rows) {
            Rational dot = 0;
            for (std::size_t j = 0; j < 4; ++j)
                dot += row[j] * v[j];
            CHECK(dot == 0);
        }
}
