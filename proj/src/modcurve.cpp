#include "mfring/modcurve.hpp"

#include "mfring/errors.hpp"

#include <string>

namespace mfring {

namespace {

long normalize_char(long p) {
    if (p == 0 || p == 2 || p == 3)
        return p;
    if (p > 3 && is_prime(p))
        return 0; // same stacky data as characteristic 0
    throw PreconditionError("characteristic must be 0 or a prime");
}

void check_level(long N, long p) {
    if (N < 1)
        throw PreconditionError("level must be positive");
    if (p != 0 && N % p == 0)
        throw PreconditionError("characteristic " + std::to_string(p) +
                                " divides the level " + std::to_string(N));
}

StackyPoint derived_wild_point(const std::string& label,
                               const std::vector<Rational>& colliding, long e0,
                               long tail, long p) {
    const ConservationResult cons = jump_by_euler_conservation(colliding, e0, tail, p);
    StackyPoint P = wild_point(label, cons.filtration_orders);
    P.jumps = cons.jumps;
    return P;
}

} // namespace

Rational StackyModel::log_canonical_degree() const {
    return canonical_divisor(*this, true).degree();
}

StackyModel stacky_model(long N, long p) {
    p = normalize_char(p);
    check_level(N, p);
    const CurveInvariants inv = curve_invariants(N);
    StackyModel model;
    model.N = N;
    model.p = p;
    model.genus = inv.genus;
    model.delta = inv.cusps;
    const Rational c2(1, 2), c3(2, 3);
    if (N == 1 && p == 3) {
        model.points.push_back(derived_wild_point("P", {c2, c3}, 6, 3, 3));
        model.jumps_derived = true;
        return model;
    }
    if (N == 1 && p == 2) {
        model.points.push_back(derived_wild_point("P", {c2, c3}, 12, 4, 2));
        model.jumps_derived = true;
        return model;
    }
    long mu2 = inv.eps2, mu3 = inv.eps3;
    if (p == 2) {
        // pairs of mu_2 points collide into wild Z/2 points
        for (long i = 0; i < inv.eps2 / 2; ++i) {
            model.points.push_back(derived_wild_point(
                "P" + std::to_string(i + 1), {c2, c2}, 2, 2, 2));
            model.jumps_derived = true;
        }
        mu2 = 0;
    } else if (p == 3) {
        // pairs of mu_3 points collide into wild Z/3 points
        for (long i = 0; i < inv.eps3 / 2; ++i) {
            model.points.push_back(derived_wild_point(
                "P" + std::to_string(i + 1), {c3, c3}, 3, 3, 3));
            model.jumps_derived = true;
        }
        mu3 = 0;
    }
    for (long i = 0; i < mu2; ++i)
        model.points.push_back(tame_point("Q" + std::to_string(i + 1), 2));
    for (long i = 0; i < mu3; ++i)
        model.points.push_back(tame_point("R" + std::to_string(i + 1), 3));
    return model;
}

std::pair<long, long> epsilon_prime(long N, long p) {
    if (p != 2 && p != 3)
        throw PreconditionError("epsilon_prime: characteristic must be 2 or 3");
    check_level(N, p);
    const CurveInvariants inv = curve_invariants(N);
    if (p == 2)
        return {inv.eps2 / 2, inv.eps3};
    return {inv.eps2, inv.eps3 / 2};
}

QDivisor canonical_divisor(const StackyModel& model, bool log_version) {
    QDivisor D;
    D.free_part = Integer(2 * model.genus - 2 + (log_version ? model.delta : 0));
    for (const auto& P : model.points) {
        Rational mu = P.coefficient() * Rational(P.e);
        mu.canonicalize();
        D.points.push_back({P.label, mu, Rational(1, P.e)});
    }
    return D;
}

RefinedSignature refined_signature(const StackyModel& model) {
    RefinedSignature sig;
    sig.g = model.genus;
    sig.delta = model.delta;
    for (const auto& P : model.points)
        sig.coefficients.push_back(P.coefficient());
    return sig;
}

long dim_modp(long N, long p, long k) {
    p = normalize_char(p);
    check_level(N, p);
    if (k < 0 || k % 2 != 0)
        throw PreconditionError("dim_modp: weight must be even and nonnegative");
    if (p == 0)
        return dimension_M(N, k);
    if (k == 0)
        return 1;
    const StackyModel model = stacky_model(N, p);
    if (k == 2) {
        // classical weight-2 count plus one section per wild unit of excess
        long extra = 0;
        for (const auto& P : model.points)
            if (!P.tame) {
                Rational c = P.coefficient();
                mpz_class fl;
                mpz_fdiv_q(fl.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
                extra += fl.get_si();
            }
        return model.genus + model.delta - 1 + extra;
    }
    const QDivisor D = canonical_divisor(model, true);
    const long deg = floor_degree(D, k / 2);
    if (deg < 2 * model.genus - 1 && model.genus > 0)
        throw InvariantError("dim_modp: floor divisor left the nonspecial range");
    if (deg < 0)
        return 0;
    return deg - model.genus + 1;
}

long dim_modp_odd_level1_char2(long k) {
    if (k < 1 || k % 2 == 0)
        throw PreconditionError("dim_modp_odd_level1_char2: weight must be odd and positive");
    // monomials x_1^a x_12^b with a + 12b = k
    return k / 12 + 1;
}

EtherealReport ethereal_report(long N, long p) {
    if (p != 2 && p != 3)
        throw PreconditionError("ethereal_report: characteristic must be 2 or 3");
    if (N <= 1)
        throw PreconditionError("ethereal_report: level must exceed 1");
    check_level(N, p);
    const long modulus = (p == 2) ? 4 : 3;
    EtherealReport rep;
    rep.exists = true;
    long r = 0;
    std::string text = std::to_string(N) + " = ";
    for (const auto& [q, a] : factor(N).factors) {
        if (r++ > 0)
            text += " * ";
        text += std::to_string(q) + (a > 1 ? "^" + std::to_string(a) : "");
        if (q % modulus != 1) {
            rep.exists = false;
            rep.criterion = text + "; prime factor " + std::to_string(q) + " is " +
                            std::to_string(q % modulus) + " mod " + std::to_string(modulus);
        }
    }
    if (rep.exists) {
        rep.weight2_count = 1L << (r - 1);
        rep.criterion = text + "; all prime factors are 1 mod " + std::to_string(modulus);
    }
    const long diff = dim_modp(N, p, 2) - dimension_M(N, 2);
    if (diff != rep.weight2_count)
        throw InvariantError("ethereal_report: criterion count " +
                             std::to_string(rep.weight2_count) +
                             " disagrees with dimension excess " + std::to_string(diff) +
                             " at N=" + std::to_string(N));
    return rep;
}

} // namespace mfring
