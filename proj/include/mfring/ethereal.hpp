#pragma once

#include "mfring/charzero.hpp"
#include "mfring/qseries.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mfring {

// A generator of the graded ring of mod-p modular forms.
struct Generator {
    int weight = 0;
    QSeriesFp expansion;
    bool ethereal = false;
    std::string name;
    std::string provenance;
};

// A relation in weight `weight`: sum coeffs[i] * monomials[i] = 0, where a
// monomial is an exponent vector over the generator list.
struct Relation {
    int weight = 0;
    std::vector<std::vector<long>> monomials;
    std::vector<long> coeffs;
};

struct RingPresentation {
    long N = 1;
    long p = 2;
    std::vector<Generator> generators;
    std::vector<Relation> relations;
    std::vector<std::pair<int, long>> dimension_table; // (weight, dim)

    std::string relation_text(const Relation& rel) const;
};

// Echelonized mod-p reduction of a characteristic-0 basis, with
// p-saturation: whenever the reductions become dependent, the witnessing
// integral combination is divided by p and reinserted, so the final rank
// equals the characteristic-0 dimension.  `saturation_steps` counts the
// divisions performed.
struct ReducedBasis {
    EchelonBasisFp span;
    long saturation_steps = 0;
};
ReducedBasis reduce_basis(const SpaceBasis& basis, long p);

// Basis of the subspace of `span` lying in the image of the p-power map,
// each element paired with its p-th root.  When `known` is given, roots
// already lying in it are flagged as rediscoveries.
struct FrobeniusCombination {
    std::vector<long> combination; // coordinates over span.rows
    QSeriesFp root;
    bool rediscovery = false;
};
std::vector<FrobeniusCombination> find_frobenius_combinations(
    const EchelonBasisFp& span, long p, const EchelonBasisFp* known = nullptr);

// If y^p - s^(p-1) y lies in `span`, return its coordinates over the span
// rows.  `sturm` is the certification bound; the series precisions must
// reach it.
std::optional<std::vector<long>> verify_as_relation(const QSeriesFp& y,
                                                    const QSeriesFp& s,
                                                    const EchelonBasisFp& span,
                                                    long sturm);

// The full pipeline for level N in characteristic p in {2, 3}: reduce
// characteristic-0 bases, find ethereal weight-2 generators via Frobenius
// roots (then lower-level pullbacks, then Artin-Schreier solves), assemble
// per-weight monomial spans, pick new generators, and extract minimal
// relations.  `t` is the q-expansion working precision (weight-2p spaces
// are computed at p*t internally).
RingPresentation build_presentation(long N, long p, int max_weight, long t);

// The one odd-weight ring in scope: level 1, characteristic 2, generated by
// the weight-1 Hasse invariant and the weight-12 reduction of the
// discriminant, with no relations.
RingPresentation build_presentation_level1_char2_full(int max_weight, long t);

// Reports when a generator is V_d of a generator of a proper divisor level
// M (d = N/M), Sturm-certified.  Levels are searched in increasing order.
struct OldformMatch {
    long M = 1;
    long d = 1;
    std::string source_name;
};
std::optional<OldformMatch> oldform_scan(const Generator& gen, long N, long p);

} // namespace mfring
