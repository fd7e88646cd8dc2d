#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "mfring/ethereal.hpp"
#include "mfring/modcurve.hpp"

using namespace mfring;

namespace {

struct FixtureEnv {
    FixtureEnv() {
        if (const char* dir = std::getenv("X0RING_FIXTURES"))
            set_fixture_directory(dir);
    }
} fixture_env;

QSeriesFp evaluate(const RingPresentation& ring, const std::vector<long>& mono,
                   long prec) {
    QSeriesFp out = fp_one(prec, ring.p);
    for (std::size_t i = 0; i < mono.size(); ++i)
        for (long e = 0; e < mono[i]; ++e)
            out = series_mul(out, series_truncate(ring.generators[i].expansion, prec));
    return out;
}

} // namespace

TEST_CASE("reduce_basis saturates to the characteristic-0 dimension") {
    for (long N : {5L, 13L}) {
        for (long p : {2L, 3L}) {
            SpaceBasis b = get_basis(N, 4, sturm_bound(4, N) + 8);
            ReducedBasis r = reduce_basis(b, p);
            CHECK(r.span.rank() == static_cast<long>(b.forms.size()));
        }
    }
    // the level-5 weight-2 reduction keeps the constant line
    SpaceBasis b2 = get_basis(5, 2, 20);
    ReducedBasis r2 = reduce_basis(b2, 2);
    CHECK(r2.span.rank() == 1);
    CHECK(r2.span.rows[0].a[0] == 1);
    CHECK(r2.span.pivots[0] == 0);
    // saturation fires on a lattice that is not 2-saturated: q + q^2 and
    // q + q^2 + 2q^3 collapse mod 2, and (difference)/2 restores rank 2
    SpaceBasis synth;
    synth.N = 1;
    synth.k = 0;
    synth.t = 5;
    QSeriesQ f1(5), f2(5);
    f1.a[1] = 1;
    f1.a[2] = 1;
    f2 = f1;
    f2.a[3] = 2;
    synth.forms = {f1, f2};
    ReducedBasis rs = reduce_basis(synth, 2);
    CHECK(rs.span.rank() == 2);
    CHECK(rs.saturation_steps >= 1);
}

TEST_CASE("Frobenius combinations are p-th powers with correct roots") {
    const long N = 5, p = 2, t = 24;
    SpaceBasis b4 = get_basis(N, 4, p * t);
    ReducedBasis r = reduce_basis(b4, p);
    auto combos = find_frobenius_combinations(r.span, p);
    CHECK_FALSE(combos.empty());
    for (const auto& c : combos) {
        QSeriesFp sum(r.span.prec, p);
        REQUIRE(c.combination.size() == r.span.rows.size());
        for (std::size_t i = 0; i < c.combination.size(); ++i)
            sum = series_add(sum, series_scale(r.span.rows[i], c.combination[i]));
        // the root carries 1/p of the span precision, so compare there
        QSeriesFp rp = series_pow(c.root, p);
        CHECK(rp == series_truncate(sum, rp.prec()));
    }
}

TEST_CASE("verify_as_relation certifies the Artin-Schreier identity") {
    // y = the level-5 ethereal generator, s = 1: y^2 - s y must lie in the
    // reduced weight-4 span
    RingPresentation ring = build_presentation(5, 2, 4, 30);
    const Generator* eth = nullptr;
    for (const auto& g : ring.generators)
        if (g.ethereal && g.weight == 2)
            eth = &g;
    REQUIRE(eth != nullptr);
    SpaceBasis b4 = get_basis(5, 4, 60);
    ReducedBasis r = reduce_basis(b4, 2);
    QSeriesFp s = fp_one(eth->expansion.prec(), 2);
    auto coords = verify_as_relation(eth->expansion, s, r.span, sturm_bound(4, 5));
    CHECK(coords.has_value());
}

TEST_CASE("level 5 characteristic 2: the paper's first example") {
    RingPresentation ring = build_presentation(5, 2, 4, 30);
    REQUIRE(ring.generators.size() == 2);
    CHECK(ring.generators[0].weight == 2);
    CHECK(ring.generators[1].weight == 2);
    CHECK(ring.generators[0].name == "x2");
    CHECK(ring.generators[1].name == "y2");
    CHECK_FALSE(ring.generators[0].ethereal);
    CHECK(ring.generators[1].ethereal);
    // x2 = 1 (reduction of the Eisenstein line)
    CHECK(ring.generators[0].expansion.a[0] == 1);
    CHECK(ring.generators[0].expansion.leading_exponent() == 0);
    // y2 = q + q^2 + q^4 + q^5 + q^8 + q^9 + q^10 + ... (frozen oracle)
    const QSeriesFp& y2 = ring.generators[1].expansion;
    long expected[] = {1, 1, 0, 1, 1, 0, 0, 1, 1, 1, 0, 0};
    for (long n = 1; n <= 12; ++n)
        CHECK(y2.a[n] == expected[n - 1]);
    CHECK(ring.relations.empty()); // free polynomial ring through weight 4
}

TEST_CASE("level 7 characteristic 3: weights 2,2,6 with one weight-8 relation... bound") {
    RingPresentation ring = build_presentation(7, 3, 8, 40);
    std::vector<int> weights;
    long ethereal_count = 0;
    for (const auto& g : ring.generators) {
        weights.push_back(g.weight);
        ethereal_count += g.ethereal ? 1 : 0;
    }
    CHECK(weights == std::vector<int>{2, 2, 6});
    CHECK(ethereal_count == 1);
    REQUIRE(ring.relations.size() == 1);
    CHECK(ring.relations[0].weight == 8);
}

TEST_CASE("level 13: generator weights in both characteristics") {
    RingPresentation r2 = build_presentation(13, 2, 6, 40);
    std::vector<int> w2;
    for (const auto& g : r2.generators)
        w2.push_back(g.weight);
    CHECK(w2 == std::vector<int>{2, 2, 4, 4, 6, 6});
    RingPresentation r3 = build_presentation(13, 3, 6, 40);
    std::vector<int> w3;
    for (const auto& g : r3.generators)
        w3.push_back(g.weight);
    CHECK(w3 == std::vector<int>{2, 2, 4, 4, 6});
}

TEST_CASE("relations evaluate to zero and dimensions match the formula") {
    for (auto [N, p] : {std::pair<long, long>{5, 2}, {7, 3}, {13, 2}, {13, 3}}) {
        RingPresentation ring = build_presentation(N, p, 8, 40);
        for (const auto& [k, d] : ring.dimension_table)
            CHECK(d == dim_modp(N, p, k));
        const long prec = sturm_bound(8, N);
        for (const auto& rel : ring.relations) {
            QSeriesFp sum(prec, p);
            for (std::size_t i = 0; i < rel.monomials.size(); ++i)
                sum = series_add(
                    sum, series_scale(evaluate(ring, rel.monomials[i], prec),
                                      rel.coeffs[i]));
            CHECK(sum.is_zero());
            // monomial weights are homogeneous
            for (const auto& mono : rel.monomials) {
                int w = 0;
                for (std::size_t i = 0; i < mono.size(); ++i)
                    w += static_cast<int>(mono[i]) * ring.generators[i].weight;
                CHECK(w == rel.weight);
            }
        }
    }
}

TEST_CASE("level-1 rings") {
    // char 3, even weights: E_2-bar in weight 2 (= reduction of... the
    // weight-2 generator) and the discriminant in weight 12
    RingPresentation r3 = build_presentation(1, 3, 12, 40);
    std::vector<int> w3;
    for (const auto& g : r3.generators)
        w3.push_back(g.weight);
    CHECK(w3 == std::vector<int>{2, 12});
    CHECK(r3.relations.empty());
    // char 2, full odd-weight ring: Hasse invariant of weight 1 plus Delta
    RingPresentation r2 = build_presentation_level1_char2_full(24, 40);
    REQUIRE(r2.generators.size() == 2);
    CHECK(r2.generators[0].weight == 1);
    CHECK(r2.generators[0].expansion == fp_one(r2.generators[0].expansion.prec(), 2));
    CHECK(r2.generators[1].weight == 12);
    CHECK(r2.generators[1].expansion ==
          reduce_mod_p(delta_series(r2.generators[1].expansion.prec()), 2));
    CHECK(r2.relations.empty());
    for (const auto& [k, d] : r2.dimension_table) {
        // F_2[x_1, x_12] has floor(k/12) + 1 monomials in every weight k
        CHECK(d == k / 12 + 1);
        if (k % 2 == 1)
            CHECK(d == dim_modp_odd_level1_char2(k));
    }
}

TEST_CASE("oldform detection") {
    // the level-5 constant generator comes from level 1
    RingPresentation ring = build_presentation(5, 2, 4, 30);
    auto match = oldform_scan(ring.generators[0], 5, 2);
    REQUIRE(match.has_value());
    CHECK(match->M == 1);
    // the ethereal generator at level 5 is genuinely new
    CHECK_FALSE(oldform_scan(ring.generators[1], 5, 2).has_value());
}
