// Command-line front end: stacky-model analysis, graded ring presentations,
// ethereal form listings, and ramification-jump solves, with deterministic
// text or line-delimited JSON output.

#include "mfring/charzero.hpp"
#include "mfring/errors.hpp"
#include "mfring/ethereal.hpp"
#include "mfring/modcurve.hpp"
#include "mfring/qseries.hpp"
#include "mfring/stacky.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

using nlohmann::json;
using namespace mfring;

namespace {

std::string rational_str(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_str();
}

std::string divisor_str(const QDivisor& D) {
    std::string out = D.free_part.get_str() + "*H";
    for (const auto& t : D.points)
        out += " + " + rational_str(t.multiplicity) + "*" + t.label;
    return out;
}

json divisor_json(const QDivisor& D) {
    json points = json::array();
    for (const auto& t : D.points)
        points.push_back({{"label", t.label},
                          {"multiplicity", rational_str(t.multiplicity)},
                          {"degree", rational_str(t.degree)}});
    return {{"free_part", D.free_part.get_str()},
            {"points", points},
            {"degree", rational_str(D.degree())}};
}

struct OutputSink {
    bool json_lines = false;

    void text(const std::string& line) const {
        if (!json_lines)
            std::cout << line << "\n";
    }
    void record(const json& rec) const {
        if (json_lines)
            std::cout << rec.dump() << "\n";
    }
};

void emit_generator(const OutputSink& out, const RingPresentation& R,
                    const Generator& g, long N, long p) {
    std::string old_text = "";
    json old_json;
    if (g.ethereal) {
        if (const auto match = oldform_scan(g, N, p)) {
            old_text = " [oldform: V_" + std::to_string(match->d) + " of " +
                       match->source_name + " at level " + std::to_string(match->M) + "]";
            old_json = {{"level", match->M}, {"d", match->d}, {"source", match->source_name}};
        } else {
            old_text = " [not an oldform]";
        }
    }
    out.text("  " + g.name + "  weight " + std::to_string(g.weight) +
             (g.ethereal ? "  ethereal" : "") + "  (" + g.provenance + ")" + old_text);
    out.text("    q-expansion: " + to_sparse_string(g.expansion) +
             "  (precision " + std::to_string(g.expansion.prec()) + ")");
    json rec = {{"record", "generator"},
                {"name", g.name},
                {"weight", g.weight},
                {"ethereal", g.ethereal},
                {"provenance", g.provenance},
                {"expansion", to_sparse_string(g.expansion)},
                {"precision", g.expansion.prec()}};
    if (!old_json.is_null())
        rec["oldform"] = old_json;
    out.record(rec);
    (void)R;
}

void emit_presentation(const OutputSink& out, const RingPresentation& R) {
    out.text("ring presentation: level " + std::to_string(R.N) + ", characteristic " +
             std::to_string(R.p));
    out.record({{"record", "ring"},
                {"level", R.N},
                {"characteristic", R.p},
                {"generator_count", R.generators.size()},
                {"relation_count", R.relations.size()}});
    out.text("generators:");
    for (const auto& g : R.generators)
        emit_generator(out, R, g, R.N, R.p);
    out.text("relations:");
    if (R.relations.empty())
        out.text("  none (polynomial ring)");
    for (const auto& rel : R.relations) {
        out.text("  [weight " + std::to_string(rel.weight) + "]  " +
                 R.relation_text(rel) + " = 0");
        out.record({{"record", "relation"},
                    {"weight", rel.weight},
                    {"text", R.relation_text(rel)}});
    }
    out.text("dimensions:");
    for (const auto& [w, d] : R.dimension_table) {
        out.text("  weight " + std::to_string(w) + ": " + std::to_string(d));
        out.record({{"record", "dimension"}, {"weight", w}, {"dim", d}});
    }
}

void cmd_analyze(const OutputSink& out, long N, long p) {
    const StackyModel model = stacky_model(N, p);
    const CurveInvariants inv = curve_invariants(N);
    long wild = 0, mu2 = 0, mu3 = 0, special = 0;
    for (const auto& P : model.points) {
        if (P.tame)
            (P.e == 2 ? mu2 : mu3) += 1;
        else if (P.e == 2 || P.e == 3)
            ++wild;
        else
            ++special;
    }
    out.text("level " + std::to_string(N) + ", characteristic " + std::to_string(model.p));
    out.text("coarse genus " + std::to_string(model.genus) + ", cusps " +
             std::to_string(model.delta) + ", psi " + std::to_string(inv.psi));
    std::string census = std::to_string(wild) + " wild Z/" + std::to_string(model.p) +
                         " (jump 1), " + std::to_string(mu2) + " mu_2, " +
                         std::to_string(mu3) + " mu_3";
    if (special)
        census += ", " + std::to_string(special) + " special wild";
    if (model.p == 0)
        census = std::to_string(mu2) + " mu_2, " + std::to_string(mu3) + " mu_3";
    out.text("stacky points: " + census);
    const QDivisor KD = canonical_divisor(model, true);
    out.text("K+Delta = " + divisor_str(KD) + "  (degree " + rational_str(KD.degree()) + ")");
    const auto [gb, rb] = presentation_bounds(refined_signature(model));
    out.text("presentation bounds: generators <= weight " + std::to_string(2 * gb) +
             ", relations <= weight " + std::to_string(2 * rb));
    json rec = {{"record", "analysis"},
                {"level", N},
                {"characteristic", model.p},
                {"genus", model.genus},
                {"cusps", model.delta},
                {"wild_points", wild + special},
                {"mu2_points", mu2},
                {"mu3_points", mu3},
                {"log_canonical", divisor_json(KD)},
                {"generator_weight_bound", 2 * gb},
                {"relation_weight_bound", 2 * rb}};
    if (model.p == 2 || model.p == 3) {
        const EtherealReport rep = (N > 1) ? ethereal_report(N, model.p)
                                           : EtherealReport{true, 1, "level 1 Hasse invariant"};
        out.text(std::string("ethereal weight-2 forms: ") +
                 (rep.exists ? std::to_string(rep.weight2_count) : std::string("none")) +
                 "  (" + rep.criterion + ")");
        rec["ethereal_exists"] = rep.exists;
        rec["ethereal_weight2_count"] = rep.weight2_count;
        rec["ethereal_criterion"] = rep.criterion;
    }
    out.record(rec);
}

void cmd_ring(const OutputSink& out, long N, long p, int max_weight, long prec, bool odd) {
    if (odd) {
        if (N != 1 || p != 2)
            throw PreconditionError("--odd applies only to level 1 in characteristic 2");
        emit_presentation(out, build_presentation_level1_char2_full(max_weight, prec));
        return;
    }
    emit_presentation(out, build_presentation(N, p, max_weight, prec));
}

void cmd_ethereal(const OutputSink& out, long N, long p, long prec) {
    const RingPresentation R = build_presentation(N, p, 4, prec);
    long count = 0;
    for (const auto& g : R.generators)
        if (g.ethereal && g.weight == 2)
            ++count;
    out.text("level " + std::to_string(N) + ", characteristic " + std::to_string(p) +
             ": " + std::to_string(count) + " ethereal weight-2 generator(s)");
    out.record({{"record", "ethereal_summary"},
                {"level", N},
                {"characteristic", p},
                {"count", count}});
    for (const auto& g : R.generators)
        if (g.ethereal && g.weight == 2)
            emit_generator(out, R, g, N, p);
}

void cmd_jump(const OutputSink& out, const std::string& preset, long ell, long genus,
              long p) {
    if (preset == "level1") {
        if (genus < 0) {
            if (ell == 7)
                genus = 3;
            else if (ell == 11)
                genus = 26;
            else
                throw PreconditionError("jump level1: supply --genus for ell outside {7, 11}");
        }
        const auto [sol, a] = solve_jump_level1(ell, genus, p);
        out.text("X(" + std::to_string(ell) + ") cover of the level-1 stack, char " +
                 std::to_string(p) + ": a = " + a.get_str() + ", jump m = " +
                 std::to_string(sol.m) + ", coefficient " + rational_str(sol.coefficient));
        out.record({{"record", "jump"},
                    {"preset", "level1"},
                    {"ell", ell},
                    {"characteristic", p},
                    {"a", a.get_str()},
                    {"m", sol.m},
                    {"coefficient", rational_str(sol.coefficient)}});
        return;
    }
    if (preset == "x1-5") {
        const JumpSolution sol = solve_jump_x1_5();
        out.text("X_1(5) cover of the level-5 stack, char 2: jump m = " +
                 std::to_string(sol.m) + ", coefficient " + rational_str(sol.coefficient));
        out.record({{"record", "jump"},
                    {"preset", "x1-5"},
                    {"m", sol.m},
                    {"coefficient", rational_str(sol.coefficient)}});
        return;
    }
    if (preset == "cartan3") {
        const CartanChainResult res = solve_jump_cartan3();
        out.text("non-split Cartan chain at level 3, char 2: b = " + res.b.get_str() +
                 ", a = " + res.a.get_str() + " (jumps 2,2 at the V_4 point)");
        out.record({{"record", "jump"},
                    {"preset", "cartan3"},
                    {"b", res.b.get_str()},
                    {"a", res.a.get_str()},
                    {"jumps", res.paper_jumps}});
        return;
    }
    throw PreconditionError("unknown jump preset: " + preset);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stacky structure and mod-p modular form rings of X_0(N)"};
    app.require_subcommand(1);

    long N = 1, p = 0, prec = -1, ell = 7, genus = -1;
    int max_weight = 12;
    bool odd = false, json_lines = false;
    std::string fixtures, format = "text", preset;

    auto add_common = [&](CLI::App* sub, bool with_level) {
        if (with_level)
            sub->add_option("N", N, "level")->required();
        sub->add_option("--char", p, "characteristic (0, 2, or 3; larger primes act as 0)");
        sub->add_option("--fixtures", fixtures, "directory of precomputed basis fixtures");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json-lines"}));
    };

    auto* analyze = app.add_subcommand("analyze", "stacky model, divisor, and ethereal census");
    add_common(analyze, true);

    auto* ring = app.add_subcommand("ring", "graded ring presentation of mod-p modular forms");
    add_common(ring, true);
    ring->add_option("--max-weight", max_weight, "top weight of the presentation");
    ring->add_option("--prec", prec, "q-expansion working precision");
    ring->add_flag("--odd", odd, "include odd weights (level 1, characteristic 2 only)");

    auto* eth = app.add_subcommand("ethereal", "q-expansions of ethereal weight-2 generators");
    add_common(eth, true);
    eth->add_option("--prec", prec, "q-expansion working precision");

    auto* jump = app.add_subcommand("jump", "ramification jump solves from covers");
    jump->add_option("preset", preset, "level1 | x1-5 | cartan3")->required();
    jump->add_option("--ell", ell, "cover level for the level1 preset");
    jump->add_option("--genus", genus, "genus of X(ell) for the level1 preset");
    jump->add_option("--char", p, "characteristic");
    jump->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json-lines"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (!fixtures.empty()) {
            if (!std::filesystem::is_directory(fixtures))
                throw FixtureError("fixture directory does not exist: " + fixtures);
            set_fixture_directory(fixtures);
        } else if (const char* env = std::getenv("X0RING_FIXTURES")) {
            set_fixture_directory(env);
        }
        OutputSink out{format == "json-lines"};
        if (analyze->parsed())
            cmd_analyze(out, N, p);
        else if (ring->parsed()) {
            if (prec < 0)
                prec = sturm_bound(std::max(max_weight, 4), N) + 8;
            cmd_ring(out, N, p, max_weight, prec, odd);
        } else if (eth->parsed()) {
            if (prec < 0)
                prec = sturm_bound(4, N) + 8;
            cmd_ethereal(out, N, p, prec);
        } else if (jump->parsed()) {
            if (p == 0)
                p = (preset == "level1") ? 3 : 2;
            cmd_jump(out, preset, ell, genus, p);
        }
    } catch (const PreconditionError& e) {
        std::cerr << "error (precondition): " << e.what() << "\n";
        return 2;
    } catch (const FixtureError& e) {
        std::cerr << "error (fixture): " << e.what() << "\n";
        return 4;
    } catch (const InvariantError& e) {
        std::cerr << "error (invariant): " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
