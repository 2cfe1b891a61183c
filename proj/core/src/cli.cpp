#include "qismet/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qismet/catalog.hpp"
#include "qismet/definition.hpp"

namespace qismet {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitNotApplicable = 2;
constexpr int kExitUsage = 64;

std::string load_text(const std::string& uri) {
    if (uri.rfind("catalog:", 0) == 0) return catalog_text(uri.substr(8));
    std::ifstream in(uri);
    if (!in) throw DefinitionError("cannot open '" + uri + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Definition load_definition(const std::string& uri) {
    if (uri.empty()) throw DefinitionError("missing input (use catalog:<name> or a file path)");
    return parse_definition(load_text(uri));
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kExitPass;
        case Verdict::Fail: return kExitFail;
        case Verdict::NotApplicable: return kExitNotApplicable;
    }
    return kExitUsage;
}

const char* hypothesis_state_name(HypothesisState s) {
    switch (s) {
        case HypothesisState::Ok: return "ok";
        case HypothesisState::Failed: return "failed";
        case HypothesisState::Warning: return "warning";
    }
    return "?";
}

Json samples_json(const CheckReport& r) {
    return Json{{"points", r.points},
                {"pairs", r.pairs},
                {"coeff_bound", r.coeff_bound},
                {"window", r.window}};
}

Json report_json(const CheckReport& r) {
    Json hyp = Json::array();
    for (const auto& h : r.hypotheses)
        hyp.push_back(Json{{"name", h.name}, {"status", hypothesis_state_name(h.state)}});
    return Json{{"id", r.id},
                {"verdict", verdict_name(r.verdict)},
                {"max_lower_violation", r.max_lower_violation},
                {"max_upper_violation", r.max_upper_violation},
                {"hypotheses", hyp},
                {"samples", samples_json(r)},
                {"seed", r.seed},
                {"tol", r.tol}};
}

Json info_json(const std::string& id, const std::string& verdict, Json values,
               const RunConfig& cfg, double tol) {
    return Json{{"id", id},
                {"verdict", verdict},
                {"max_lower_violation", 0.0},
                {"max_upper_violation", 0.0},
                {"hypotheses", Json::array()},
                {"samples",
                 Json{{"points", cfg.samples},
                      {"pairs", cfg.pairs},
                      {"coeff_bound", cfg.coeff_bound},
                      {"window", cfg.window}}},
                {"seed", cfg.seed},
                {"tol", tol},
                {"values", std::move(values)}};
}

void emit_report(const CheckReport& r, const RunConfig& cfg, std::ostream& out) {
    if (cfg.records) {
        out << report_json(r).dump() << "\n";
        return;
    }
    out << "check=" << r.id << " verdict=" << verdict_name(r.verdict)
        << " max_lower_violation=" << format_real(r.max_lower_violation)
        << " max_upper_violation=" << format_real(r.max_upper_violation)
        << " points=" << r.points << " pairs=" << r.pairs
        << " coeff_bound=" << format_real(r.coeff_bound)
        << " window=" << format_real(r.window) << " seed=" << r.seed
        << " tol=" << format_real(r.tol) << "\n";
    for (const auto& h : r.hypotheses)
        out << "  hypothesis " << h.name << " = " << hypothesis_state_name(h.state) << "\n";
}

SampleSpec sample_spec(const RunConfig& cfg) {
    SampleSpec s;
    s.points = cfg.samples;
    s.tuples = cfg.pairs;
    s.seed = cfg.seed;
    s.coeff_bound = cfg.coeff_bound;
    s.point_options.window = cfg.window;
    s.point_options.margin = cfg.margin;
    return s;
}

const ManifoldEntry& first_with_structure(const Definition& def, const std::string& what) {
    for (const auto& m : def.manifolds)
        if (m.structure) return m;
    throw DefinitionError(what + " needs a manifold with a [structure] section");
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
    Definition def = load_definition(cfg.manifold_uri);
    const ManifoldEntry& entry = first_with_structure(def, "verify");
    double tol = cfg.tol.value_or(1e-8);
    SampleSpec spec = sample_spec(cfg);
    auto points = entry.manifold.sample_points(spec.points, spec.seed, spec.point_options);
    AxiomReport rep = verify_axioms(*entry.structure, points, tol);

    int exit = kExitPass;
    for (const auto& ax : rep.axioms) {
        CheckReport r;
        r.id = "axiom." + ax.id;
        r.verdict = ax.ok ? Verdict::Pass : Verdict::Fail;
        r.max_upper_violation = ax.residual;
        r.points = rep.points;
        r.coeff_bound = cfg.coeff_bound;
        r.window = cfg.window;
        r.seed = cfg.seed;
        r.tol = tol;
        if (cfg.records) {
            out << report_json(r).dump() << "\n";
        } else {
            out << "axiom (" << ax.id << ") " << ax.label
                << "  residual=" << format_real(ax.residual) << "  "
                << (ax.ok ? "ok" : "FAILED") << "\n";
        }
        if (!ax.ok) exit = kExitFail;
    }
    if (!cfg.records)
        out << "verdict=" << (rep.pass ? "pass" : "fail") << " manifold=" << entry.manifold.name()
            << " points=" << rep.points << " seed=" << cfg.seed << " tol=" << format_real(tol)
            << "\n";
    return exit;
}

int run_classify(const RunConfig& cfg, std::ostream& out) {
    Definition def = load_definition(cfg.manifold_uri);
    const ManifoldEntry& entry = first_with_structure(def, "classify");
    double tol = cfg.tol.value_or(1e-6);
    SampleSpec spec = sample_spec(cfg);
    auto points = entry.manifold.sample_points(spec.points, spec.seed, spec.point_options);

    ContactResult contact = verify_contact(*entry.structure, points, 1e-8);
    NkResult nk = classify_nk(*entry.structure, points, tol);
    SasakianReport sas = verify_sasakian(*entry.structure, points, tol);
    EinsteinFit fit = einstein_fit(*entry.structure, points, tol);

    if (cfg.records) {
        out << info_json("classify.contact", contact.contact ? "pass" : "fail",
                         Json{{"min_coefficient", contact.min_coefficient}}, cfg, 1e-8)
                   .dump()
            << "\n";
        out << info_json("classify.nk",
                         nk.indeterminate ? "not-applicable" : (nk.is_nk ? "pass" : "fail"),
                         Json{{"k", nk.k}, {"residual", nk.residual}}, cfg, tol)
                   .dump()
            << "\n";
        out << info_json("classify.sasakian", sas.sasakian ? "pass" : "fail",
                         Json{{"nabla_phi_residual", sas.nabla_phi_residual},
                              {"nabla_xi_residual", sas.nabla_xi_residual}},
                         cfg, tol)
                   .dump()
            << "\n";
        out << info_json("classify.einstein_fit",
                         fit.eta_einstein ? "pass" : "fail",
                         Json{{"einstein", fit.einstein},
                              {"eta_einstein", fit.eta_einstein},
                              {"a", fit.a},
                              {"b", fit.b},
                              {"residual", fit.residual}},
                         cfg, tol)
                   .dump()
            << "\n";
    } else {
        out << "manifold=" << entry.manifold.name() << " points=" << points.size()
            << " seed=" << cfg.seed << "\n";
        out << "contact=" << (contact.contact ? "yes" : "no")
            << " min_coefficient=" << format_real(contact.min_coefficient) << "\n";
        if (nk.indeterminate)
            out << "N(k)=indeterminate\n";
        else
            out << "N(k)=" << (nk.is_nk ? "yes" : "no") << " k=" << format_real(nk.k)
                << " residual=" << format_real(nk.residual) << "\n";
        out << "sasakian=" << (sas.sasakian ? "yes" : "no")
            << " nabla_phi_residual=" << format_real(sas.nabla_phi_residual)
            << " nabla_xi_residual=" << format_real(sas.nabla_xi_residual) << "\n";
        out << "einstein=" << (fit.einstein ? "yes" : "no")
            << " eta_einstein=" << (fit.eta_einstein ? "yes" : "no")
            << " a=" << format_real(fit.a) << " b=" << format_real(fit.b)
            << " residual=" << format_real(fit.residual) << "\n";
    }
    return nk.indeterminate ? kExitNotApplicable : kExitPass;
}

int run_curvature(const RunConfig& cfg, std::ostream& out) {
    Definition def = load_definition(cfg.manifold_uri);
    const ManifoldEntry& entry = def.manifolds.front();
    double flat_tol = cfg.tol.value_or(1e-7);
    SampleSpec spec = sample_spec(cfg);
    auto points = entry.manifold.sample_points(spec.points, spec.seed, spec.point_options);

    double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
    for (const auto& p : points) {
        double r = curvature_at(entry.manifold, p).scalar;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (cfg.records)
        out << info_json("curvature.scalar", "pass", Json{{"min", rmin}, {"max", rmax}}, cfg,
                         flat_tol)
                   .dump()
            << "\n";
    else
        out << "scalar_curvature min=" << format_real(rmin) << " max=" << format_real(rmax)
            << "\n";

    if (entry.structure) {
        EinsteinFit fit = einstein_fit(*entry.structure, points, 1e-6);
        if (cfg.records)
            out << info_json("curvature.einstein_fit",
                             fit.eta_einstein ? "pass" : "fail",
                             Json{{"einstein", fit.einstein},
                                  {"eta_einstein", fit.eta_einstein},
                                  {"a", fit.a},
                                  {"b", fit.b},
                                  {"residual", fit.residual}},
                             cfg, 1e-6)
                       .dump()
                << "\n";
        else
            out << "einstein=" << (fit.einstein ? "yes" : "no")
                << " eta_einstein=" << (fit.eta_einstein ? "yes" : "no")
                << " a=" << format_real(fit.a) << " b=" << format_real(fit.b)
                << " residual=" << format_real(fit.residual) << "\n";
    }

    for (DerivedKind kind : {DerivedKind::Weyl, DerivedKind::Concircular,
                             DerivedKind::Conharmonic, DerivedKind::Projective}) {
        FlatnessResult fr = flatness_test(kind, entry.manifold, points, flat_tol);
        if (cfg.records)
            out << info_json(std::string("curvature.flatness.") + derived_kind_name(kind),
                             fr.flat ? "pass" : "fail",
                             Json{{"flat", fr.flat}, {"max_residual", fr.max_residual}}, cfg,
                             flat_tol)
                       .dump()
                << "\n";
        else
            out << "flatness." << derived_kind_name(kind) << " flat=" << (fr.flat ? "yes" : "no")
                << " max_residual=" << format_real(fr.max_residual) << "\n";
    }
    return kExitPass;
}

Embedding load_embedding(const RunConfig& cfg) {
    Definition def = load_definition(cfg.pair_uri);
    if (def.embeddings.empty())
        throw DefinitionError("input has no [embedding] section");
    Embedding e = def.make_embedding(0);
    if (cfg.A) e.A = *cfg.A;
    if (cfg.B) e.B = *cfg.B;
    if (cfg.D) e.D = *cfg.D;
    return e;
}

int run_embed_check(const RunConfig& cfg, std::ostream& out) {
    Embedding e = load_embedding(cfg);
    double tol = cfg.tol.value_or(1e-9);
    CheckReport rep = check_embedding(e, sample_spec(cfg), tol);
    emit_report(rep, cfg, out);
    return verdict_exit(rep.verdict);
}

int run_estimate(const RunConfig& cfg, std::ostream& out) {
    Embedding e = load_embedding(cfg);
    SampleSpec spec = sample_spec(cfg);
    auto points = e.source.manifold.sample_points(spec.points, spec.seed, spec.point_options);
    auto pairs = sample_vector_pairs(e.source.manifold.dim(), spec.tuples, spec.coeff_bound,
                                     spec.seed);
    ConstantsEstimate est = estimate_constants(e, points, pairs);
    if (cfg.records)
        out << info_json("estimate", "pass",
                         Json{{"A_star", est.A}, {"B_star", est.B}}, cfg, 0.0)
                   .dump()
            << "\n";
    else
        out << "A_star=" << format_real(est.A) << " B_star=" << format_real(est.B)
            << " points=" << points.size() << " pairs=" << pairs.size() << " seed=" << cfg.seed
            << " coeff_bound=" << format_real(cfg.coeff_bound) << "\n";
    return kExitPass;
}

int run_quasi_dense(const RunConfig& cfg, std::ostream& out) {
    Embedding e = load_embedding(cfg);
    SampleSpec spec = sample_spec(cfg);
    auto points = e.source.manifold.sample_points(spec.points, spec.seed, spec.point_options);
    auto z_pool = sample_vectors(e.target.manifold.dim(), spec.tuples, spec.coeff_bound,
                                 spec.seed ^ 0x5aULL);
    auto x_pool = sample_vectors(e.source.manifold.dim(), spec.tuples, spec.coeff_bound,
                                 spec.seed ^ 0xa5ULL);
    QuasiDenseResult res = check_quasi_dense(e, z_pool, x_pool, points, e.D);
    std::string verdict = res.quasi_dense ? (*res.quasi_dense ? "pass" : "fail") : "pass";
    if (cfg.records) {
        Json values{{"D_star", res.d_star}};
        if (res.quasi_dense) values["declared_D"] = res.declared_d;
        out << info_json("quasi-dense", verdict, values, cfg, 0.0).dump() << "\n";
    } else {
        out << "D_star=" << format_real(res.d_star);
        if (res.quasi_dense)
            out << " declared_D=" << format_real(res.declared_d)
                << " quasi_dense=" << (*res.quasi_dense ? "yes" : "no");
        out << "\n";
    }
    if (res.quasi_dense && !*res.quasi_dense) return kExitFail;
    return kExitPass;
}

int run_theorem(const RunConfig& cfg, std::ostream& out) {
    auto id = theorem_id_from_string(cfg.theorem_id);
    if (!id) throw DefinitionError("unknown theorem id '" + cfg.theorem_id + "'");
    Embedding e = load_embedding(cfg);
    TheoremOptions opt;
    opt.samples = sample_spec(cfg);
    opt.tol = cfg.tol.value_or(1e-9);
    opt.force = cfg.force;
    opt.A_override = cfg.A;
    opt.B_override = cfg.B;
    opt.D_override = cfg.D;
    CheckReport rep = check_theorem(*id, e, opt);
    emit_report(rep, cfg, out);
    return verdict_exit(rep.verdict);
}

int run_catalog(const RunConfig& cfg, std::ostream& out) {
    for (const auto& name : catalog_names()) {
        CatalogEntry e = catalog_load(name);
        if (cfg.records)
            out << Json{{"id", "catalog." + name},
                        {"manifolds", e.definition.manifolds.size()},
                        {"embeddings", e.definition.embeddings.size()},
                        {"provenance", e.provenance}}
                           .dump()
                << "\n";
        else
            out << name << ": " << e.provenance << "\n";
    }
    return kExitPass;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.subcommand == "verify") return run_verify(cfg, out);
        if (cfg.subcommand == "classify") return run_classify(cfg, out);
        if (cfg.subcommand == "curvature") return run_curvature(cfg, out);
        if (cfg.subcommand == "embed-check") return run_embed_check(cfg, out);
        if (cfg.subcommand == "estimate") return run_estimate(cfg, out);
        if (cfg.subcommand == "quasi-dense") return run_quasi_dense(cfg, out);
        if (cfg.subcommand == "theorem") return run_theorem(cfg, out);
        if (cfg.subcommand == "catalog") return run_catalog(cfg, out);
        err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DefinitionError& e) {
        err << "definition error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitFail;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

} // namespace qismet
