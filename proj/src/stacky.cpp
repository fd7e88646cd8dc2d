#include "mfring/stacky.hpp"

#include "mfring/errors.hpp"

#include <algorithm>
#include <numeric>

namespace mfring {

Rational coefficient_from_filtration(const std::vector<long>& orders) {
    if (orders.empty() || orders.front() < 1)
        throw PreconditionError("coefficient_from_filtration: empty filtration");
    for (std::size_t i = 1; i < orders.size(); ++i)
        if (orders[i] > orders[i - 1] || orders[i] < 1)
            throw PreconditionError("coefficient_from_filtration: orders must be nonincreasing and positive");
    Rational c(0);
    for (long o : orders) {
        Rational term(o - 1, orders.front());
        term.canonicalize(); // mpq_class(num, den) does not reduce
        c += term;
    }
    return c;
}

Rational StackyPoint::coefficient() const {
    if (tame)
        return Rational(e - 1, e);
    return coefficient_from_filtration(filtration_orders);
}

StackyPoint tame_point(std::string label, long e) {
    if (e < 2)
        throw PreconditionError("tame_point: order must be at least 2");
    StackyPoint P;
    P.label = std::move(label);
    P.e = e;
    P.tame = true;
    P.filtration_orders = {e};
    return P;
}

StackyPoint wild_point(std::string label, std::vector<long> orders) {
    if (orders.size() < 2)
        throw PreconditionError("wild_point: a wild filtration has at least two steps");
    StackyPoint P;
    P.label = std::move(label);
    P.e = orders.front();
    P.tame = false;
    P.jumps.assign(orders.size() - 1, 1);
    P.filtration_orders = std::move(orders);
    (void)coefficient_from_filtration(P.filtration_orders); // validates shape
    return P;
}

Rational QDivisor::degree() const {
    Rational d(free_part);
    for (const auto& term : points)
        d += term.multiplicity * term.degree;
    return d;
}

long floor_degree(const QDivisor& D, long k) {
    if (k < 0)
        throw PreconditionError("floor_degree: negative multiple");
    Integer deg = k * Integer(D.free_part);
    for (const auto& term : D.points) {
        Rational x = Rational(k) * term.multiplicity * term.degree;
        x.canonicalize();
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        deg += fl;
    }
    if (!deg.fits_slong_p())
        throw InvariantError("floor_degree: degree overflow");
    return deg.get_si();
}

long h0(const QDivisor& D, long g) {
    if (g < 0)
        throw PreconditionError("h0: negative genus");
    const long deg = floor_degree(D, 1);
    if (deg < 0)
        return 0;
    if (deg >= 2 * g - 1 || g == 0)
        return deg - g + 1;
    if (deg == 0) {
        // floor(D) is effective of degree 0 only when it is empty
        bool empty = D.free_part == 0;
        for (const auto& term : D.points) {
            Rational x = term.multiplicity * term.degree;
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
            empty = empty && fl == 0;
        }
        if (empty)
            return 1;
    }
    throw PreconditionError("h0: divisor possibly special (0 <= deg <= 2g-2); use a classical dimension path");
}

JumpSolution solve_jump(const CoverInstance& inst) {
    if (inst.degree < 1 || inst.points < 1 || inst.e0 < 2 || inst.tail < 2)
        throw PreconditionError("solve_jump: malformed cover instance");
    // lhs = d * (base + points * ((e0-1) + m*(tail-1))/e0)
    Rational c_total = inst.lhs / Rational(inst.degree) - inst.base;
    Rational c = c_total / Rational(inst.points);
    Rational m = (c * Rational(inst.e0) - Rational(inst.e0 - 1)) / Rational(inst.tail - 1);
    m.canonicalize();
    if (m.get_den() != 1)
        throw InvariantError("solve_jump: non-integral jump for " + inst.label);
    if (m.get_num() <= 0 || !m.get_num().fits_slong_p())
        throw InvariantError("solve_jump: nonpositive jump for " + inst.label);
    JumpSolution sol;
    sol.m = m.get_num().get_si();
    if (inst.p > 1 && sol.m % inst.p == 0)
        throw InvariantError("solve_jump: jump divisible by the characteristic for " + inst.label);
    sol.coefficient = c;
    sol.deg_K = inst.base + Rational(inst.points) * c;
    return sol;
}

std::pair<JumpSolution, Integer> solve_jump_level1(long ell, long genus_Xell, long p) {
    if (p != 2 && p != 3)
        throw PreconditionError("solve_jump_level1: characteristic must be 2 or 3");
    if (!is_prime(ell) || ell == p || ell < 5)
        throw PreconditionError("solve_jump_level1: ell must be a prime >= 5 distinct from p");
    CoverInstance inst;
    inst.label = "X(" + std::to_string(ell) + ") over the level-1 stack, char " + std::to_string(p);
    inst.degree = ell * (ell * ell - 1) / 2; // #PSL_2(F_ell)
    inst.lhs = Rational(2 * genus_Xell - 2);
    inst.base = Rational(-2) + Rational(ell - 1, ell); // coarse K plus the cusp term
    inst.e0 = (p == 3) ? 6 : 12;
    inst.tail = (p == 3) ? 3 : 4;
    inst.p = p;
    const JumpSolution sol = solve_jump(inst);
    // a/e0 = deg K of the level-1 stack = -2 + c (the cusp term in `base`
    // belongs to the cover equation, not to K itself)
    Rational a = Rational(inst.e0) * (Rational(-2) + sol.coefficient);
    a.canonicalize();
    if (a.get_den() != 1)
        throw InvariantError("solve_jump_level1: non-integral canonical numerator");
    return {sol, Integer(a.get_num())};
}

JumpSolution solve_jump_x1_5() {
    CoverInstance inst;
    inst.label = "X_1(5) over the level-5 stack, char 2";
    inst.degree = 2;
    inst.lhs = Rational(-2); // 2g(X_1(5)) - 2 with g = 0
    inst.base = Rational(-2);
    inst.e0 = 2;
    inst.tail = 2;
    inst.p = 2;
    return solve_jump(inst);
}

CartanChainResult solve_jump_cartan3() {
    CartanChainResult out;
    // X(3) = P^1 over X_ns(3): one wild Z/2 point of unknown jump.
    CoverInstance step1;
    step1.label = "X(3) over X_ns(3), char 2";
    step1.degree = 2;
    step1.lhs = Rational(-2);
    step1.base = Rational(-2);
    step1.e0 = 2;
    step1.tail = 2;
    step1.p = 2;
    out.step1 = solve_jump(step1);
    // X_ns(3) over X_ns+(3): the colliding point has G_0 = G_1 = V_4.
    CoverInstance step2;
    step2.label = "X_ns(3) over X_ns+(3), char 2";
    step2.degree = 2;
    step2.lhs = out.step1.deg_K;
    step2.base = Rational(-2);
    step2.e0 = 4;
    step2.tail = 4;
    step2.p = 2;
    out.step2 = solve_jump(step2);
    auto numerator = [](const Rational& c, long e0) {
        Rational a = c * Rational(e0);
        a.canonicalize();
        if (a.get_den() != 1)
            throw InvariantError("solve_jump_cartan3: non-integral point numerator");
        return Integer(a.get_num());
    };
    out.b = numerator(out.step1.coefficient, 2);
    out.a = numerator(out.step2.coefficient, 4);
    out.paper_jumps = {2, 2};
    return out;
}

ConservationResult jump_by_euler_conservation(const std::vector<Rational>& tame_coefficients,
                                              long e0, long tail, long p) {
    if (tame_coefficients.empty() || e0 < 2 || tail < 2)
        throw PreconditionError("jump_by_euler_conservation: malformed collision data");
    Rational target(0);
    for (const auto& c : tame_coefficients)
        target += c;
    Rational m = (target * Rational(e0) - Rational(e0 - 1)) / Rational(tail - 1);
    m.canonicalize();
    if (m.get_den() != 1 || m.get_num() <= 0 || !m.get_num().fits_slong_p())
        throw InvariantError("jump_by_euler_conservation: no admissible integral jump");
    ConservationResult out;
    out.m = m.get_num().get_si();
    if (p > 1 && out.m % p == 0)
        throw InvariantError("jump_by_euler_conservation: jump divisible by the characteristic");
    out.coefficient = target;
    out.filtration_orders.push_back(e0);
    out.filtration_orders.insert(out.filtration_orders.end(), out.m, tail);
    out.jumps.assign(1, out.m);
    return out;
}

std::pair<long, long> presentation_bounds(const RefinedSignature& sig) {
    if (sig.g < 0 || sig.delta < 0)
        throw PreconditionError("presentation_bounds: malformed signature");
    long e = 1;
    Integer c(0);
    for (Rational ci : sig.coefficients) {
        ci.canonicalize();
        if (ci <= 0)
            throw PreconditionError("presentation_bounds: coefficients must be positive");
        if (!ci.get_den().fits_slong_p())
            throw PreconditionError("presentation_bounds: coefficient denominator too large");
        e = std::max(e, ci.get_den().get_si());
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), ci.get_num_mpz_t(), ci.get_den_mpz_t());
        c += fl;
    }
    if (Integer(sig.g) + c + Integer(sig.delta) >= 2) {
        const long b = std::max(3L, e);
        return {b, 2 * b};
    }
    return {3 * e, 6 * e};
}

bool trivial_canring_check(const StackyPoint& point, long delta) {
    if (point.tame)
        throw PreconditionError("trivial_canring_check: expects a wild point");
    const Rational c = point.coefficient();
    QDivisor K;
    K.free_part = Integer(-2 + delta);
    K.points.push_back({point.label, c * Rational(point.e), Rational(1, point.e)});
    Rational cc = c;
    cc.canonicalize();
    if (!cc.get_den().fits_slong_p())
        throw PreconditionError("trivial_canring_check: coefficient denominator too large");
    const long period = cc.get_den().get_si();
    for (long k = 1; k <= period; ++k)
        if (floor_degree(K, k) >= 0)
            return false;
    return true;
}

} // namespace mfring
