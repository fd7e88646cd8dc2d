#pragma once

#include "mfring/exactnum.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mfring {

// A stacky point on a curve: automorphism order e, and for wild points the
// ramification filtration G_0 >= G_1 >= ... recorded by its subgroup orders
// (the list ends at the last nontrivial step).  Tame points have no jumps
// and the filtration is just (e).
struct StackyPoint {
    std::string label;
    long e = 1;               // order of the stabilizer
    bool tame = true;
    std::vector<long> jumps;  // empty iff tame
    std::vector<long> filtration_orders; // |G_0| >= |G_1| >= ... >= 2

    // The wild Riemann-Hurwitz coefficient c of the point in the
    // pushforward of the canonical divisor.
    Rational coefficient() const;
};

// Construct a tame point of order e / a wild point with the given
// filtration orders (jump list derived as one jump step per tail entry).
StackyPoint tame_point(std::string label, long e);
StackyPoint wild_point(std::string label, std::vector<long> orders);

// A Q-divisor on a stacky curve: an integer multiple of a generic
// (nonstacky, degree-1) point plus multiplicities at stacky points.  A
// point of order e has degree 1/e, and a multiplicity mu there contributes
// mu/e to the total degree.
struct QDivisorTerm {
    std::string label;
    Rational multiplicity;
    Rational degree; // 1/e, positive
};

struct QDivisor {
    Integer free_part = 0;
    std::vector<QDivisorTerm> points;

    Rational degree() const;
};

// (g; c_1, ..., c_r; delta) of section-ring presentation bounds.
struct RefinedSignature {
    long g = 0;
    std::vector<Rational> coefficients;
    long delta = 0;
};

// A cover Y -> X used to solve for an unknown ramification jump: the degree
// of the pullback of K_X equals deg K_Y.  `base` is the known part of
// deg K_X (coarse 2g-2 plus known point coefficients plus any cusp
// ramification term); the unknown points share one jump m and contribute
// points * ((e0-1) + m*(tail-1))/e0.
struct CoverInstance {
    std::string label;
    long degree = 1;      // d
    Rational lhs;         // deg K_Y (2*g(Y) - 2 for a curve source)
    Rational base;        // known part of deg K_X
    long e0 = 2;          // |G_0| at the unknown point(s)
    long tail = 2;        // |G_i| for 1 <= i <= m
    long p = 2;           // residue characteristic
    long points = 1;      // number of symmetric unknown points
};

struct JumpSolution {
    long m = 0;             // the solved jump
    Rational coefficient;   // c at each unknown point
    Rational deg_K;         // total degree of K_X implied by the solve
};

// c = sum_i (|G_i| - 1)/|G_0| over the given filtration orders.
Rational coefficient_from_filtration(const std::vector<long>& orders);

// deg floor(k*D) = k * free_part + sum_i floor(k * mu_i * deg_i), each
// stacky point mapping to a coarse point of degree 1.
long floor_degree(const QDivisor& D, long k);

// Riemann-Roch on the coarse floor divisor.  Refuses to guess in the
// special range 0 <= deg floor(D) <= 2g-2 (unless the floor is empty).
long h0(const QDivisor& D, long g);

// Solve the Riemann-Hurwitz jump equation of a cover; the solution must be
// a positive integer coprime to the residue characteristic.
JumpSolution solve_jump(const CoverInstance& instance);

// Preset covers.
// X(ell) -> the level-1 stack in characteristic p (3 or 2): the classical
// e0 = 6 (resp. 12) point with tail Z/3 (resp. Z/4).  Returns the solution
// together with the constant a = e0 * deg K reported in the source.
std::pair<JumpSolution, Integer> solve_jump_level1(long ell, long genus_Xell, long p);
// X_1(5) -> the level-5 stack in characteristic 2 (degree-2 etale cover of
// a genus-0 target with one wild Z/2 point).
JumpSolution solve_jump_x1_5();
// Two-step non-split Cartan chain at level 3 in characteristic 2:
// X(3) -> X_ns(3) gives b, then X_ns(3) -> X_ns+(3) gives a.  Reported
// constants are the stacky-point numerators (b = e0*c of step one, a of
// step two); the second point's paper-convention jump list is (2,2).
struct CartanChainResult {
    JumpSolution step1;
    JumpSolution step2;
    Integer b; // numerator of the Z/2-point term of K_{X_ns(3)}
    Integer a; // numerator of the V4-point term of K_{X_ns+(3)}
    std::vector<long> paper_jumps; // (2,2)
};
CartanChainResult solve_jump_cartan3();

// Choose the jump of a wild point formed by collision so that its
// coefficient equals the sum of the colliding tame coefficients (Euler
// characteristics of fibers are constant in the family).  Returns the
// filtration orders (G_0 followed by m tail entries) and the jump list.
struct ConservationResult {
    long m = 0;
    Rational coefficient;
    std::vector<long> filtration_orders;
    std::vector<long> jumps;
};
ConservationResult jump_by_euler_conservation(const std::vector<Rational>& tame_coefficients,
                                              long e0, long tail, long p);

// (generator degree bound, relation degree bound) of the section ring of
// K + Delta for the given signature: e = max coefficient denominator,
// c = sum floor(c_i); bounds are (max(3,e), 2 max(3,e)) when
// g + c + delta >= 2, and (3e, 6e) otherwise.
std::pair<long, long> presentation_bounds(const RefinedSignature& sig);

// For a genus-0, cuspless model with a single wild point of coefficient c:
// true iff deg floor(k*K) < 0 for 1 <= k <= lcm of the denominators (which
// suffices by periodicity), i.e. the canonical ring is trivial.
bool trivial_canring_check(const StackyPoint& point, long delta = 0);

} // namespace mfring
