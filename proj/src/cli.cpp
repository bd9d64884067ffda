#include "cartanlab/cli.hpp"

#include "cartanlab/builtin_algebras.hpp"
#include "cartanlab/catalog.hpp"
#include "cartanlab/errors.hpp"
#include "cartanlab/io.hpp"
#include "cartanlab/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cartanlab {

namespace {

using json = nlohmann::ordered_json;

struct Globals {
    bool json = false;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
};

std::uint64_t resolve_seed(const Globals& g) {
    if (g.seed) return *g.seed;
    if (const char* env = std::getenv("CARTANLAB_SEED")) {
        std::string s(env);
        try {
            std::size_t used = 0;
            unsigned long long v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw InputError("CARTANLAB_SEED must be a non-negative integer, got '" + s + "'");
        }
    }
    return 0;
}

std::string point_text(const Point& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_double(p[i]);
    return s + ")";
}

std::string names_text(const AlmostLieAlgebra& alg, std::initializer_list<std::size_t> idx) {
    std::string s = "(";
    bool first = true;
    for (std::size_t i : idx) {
        s += (first ? "" : ",") + alg.basis_names()[i];
        first = false;
    }
    return s + ")";
}

std::string vec_text(const QVec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
    return s + "]";
}

Report start(const std::string& command, const SourceText& src, std::uint64_t seed) {
    Report r;
    r.command = command;
    r.inputs.push_back({src.label, src.sha256});
    r.seed = seed;
    return r;
}

void cmd_check_algebra(Report& r, const SourceText& src) {
    AlgebraInput in = load_algebra(src);
    const auto& alg = in.algebra;
    r.details["name"] = alg.name();
    r.details["dim"] = alg.dim();
    r.verdict("antisymmetry", true);
    if (auto w = jacobi_witness(alg)) {
        auto j = jacobiator(alg, unit_vec(alg.dim(), (*w)[0]), unit_vec(alg.dim(), (*w)[1]), unit_vec(alg.dim(), (*w)[2]));
        r.verdict("jacobi", false, names_text(alg, {(*w)[0], (*w)[1], (*w)[2]}) + " jacobiator " + vec_text(j));
    } else {
        r.verdict("jacobi", true);
    }
}

SplittingPair splitting_of(const ExtensionInput& in) {
    if (in.left) return complete_splitting(in.cte.ext, *in.left);
    if (in.right) return complete_splitting(in.cte.ext, *in.right);
    throw InputError("extension gives neither l nor r");
}

std::string pair_text(const AlmostLieAlgebra& alg, const Pair& p) { return names_text(alg, {p[0], p[1]}); }

void cmd_check_extension(Report& r, const SourceText& src) {
    ExtensionInput in = load_extension(src);
    const auto& cte = in.cte;
    r.details["name"] = in.name;
    r.details["dims"] = json{{"h", cte.ext.h_dim()}, {"z", cte.ext.z_dim()}, {"v", cte.ext.v_dim()}};

    ExactnessReport ex = check_exact(cte.ext);
    std::string fails;
    for (const auto& f : ex.failures) fails += (fails.empty() ? "" : "; ") + f;
    r.verdict("exact-sequence", ex.ok(), fails);

    try {
        validate_cartan_type(cte);
        r.verdict("cartan-type", true);
    } catch (const NotAMorphism& e) {
        r.verdict("cartan-type", false, e.what());
    }

    if (auto w = jacobi_witness(cte.z_alg))
        r.details["z_jacobi"] = "fails on " + names_text(cte.z_alg, {(*w)[0], (*w)[1], (*w)[2]});
    else
        r.details["z_jacobi"] = "holds";

    if (!in.left && !in.right) {
        r.details["splitting"] = "none given; reductivity not checked";
        return;
    }
    SplittingPair sp;
    try {
        sp = splitting_of(in);
        r.verdict("splitting", true);
    } catch (const NotASplitting& e) {
        r.verdict("splitting", false, e.what());
        return;
    }
    ReductiveReport red = check_reductive(cte, sp);
    std::string wit;
    if (red.morphism_witness) wit = "l not a bracket morphism on " + pair_text(cte.z_alg, *red.morphism_witness);
    if (red.action_witness) {
        if (!wit.empty()) wit += "; ";
        wit += "h-action mismatch on (h" + std::to_string((*red.action_witness)[0] + 1) + ", v" +
               std::to_string((*red.action_witness)[1] + 1) + ")";
    }
    r.verdict("reductive", red.ok(), wit);
    if (!red.ok()) return;
    IsoReport iso = semidirect_iso_check(cte, sp);
    r.verdict("semidirect-iso", iso.ok, iso.witness ? pair_text(cte.z_alg, *iso.witness) : "");
    AlmostLieAlgebra k = induced_quotient_bracket(cte, sp);
    r.details["k_is_lie"] = is_lie(k);
}

void cmd_extract_bracket(Report& r, const SourceText& src, const std::string& output) {
    ExtensionInput in = load_extension(src);
    SplittingPair sp = splitting_of(in);
    AlmostLieAlgebra k;
    try {
        k = induced_quotient_bracket(in.cte, sp);
    } catch (const NotReductive& e) {
        r.verdict("reductive", false, e.what());
        return;
    }
    r.verdict("reductive", true);
    std::string toml = algebra_to_toml(k);
    r.details["k_toml"] = toml;
    r.details["k_is_lie"] = is_lie(k);
    if (!output.empty()) {
        std::ofstream f(output, std::ios::binary);
        if (!f) throw InputError("cannot write '" + output + "'");
        f << toml;
    }
}

void cmd_tower(Report& r, const SourceText& src, std::optional<std::size_t> expect) {
    PfaffianInput in = load_pfaffian(src);
    const auto& pf = in.data;
    try {
        check_equivariance(pf);
        r.verdict("equivariance", true);
    } catch (const EquivarianceViolated& e) {
        r.verdict("equivariance", false,
                  "alpha = " + pf.g.basis_names()[e.alpha] + ", basis = " + pf.g.basis_names()[e.basis]);
        return;
    }
    Subspace h = symbol_ideal(pf);
    ImageW w = image_W(pf);
    r.details["name"] = in.name;
    r.details["g_dim"] = pf.g.dim();
    r.details["h_dim"] = h.dim();
    r.details["W_dim"] = w.W.dim();
    ReductionTower t = reduction_tower(pf);
    json stages = json::array();
    for (const auto& s : t.stages)
        stages.push_back({{"g_dim", s.g.dim()}, {"V_dim", s.rho.space_dim}, {"W_dim", s.W.dim()}, {"kernel_dim", s.kernel.dim()}});
    r.details["stages"] = stages;
    r.details["order"] = t.order;
    if (!expect && in.expected_order) expect = in.expected_order;
    if (expect)
        r.verdict("order", t.order == *expect,
                  "order " + std::to_string(t.order) + ", expected " + std::to_string(*expect));
}

void cmd_check_flatness(Report& r, const SourceText& src, const SweepOptions& opt) {
    ScenarioInput in = load_scenario(src);
    const Scenario& sc = in.scenario;
    FlatnessReport fr = flatness_check(sc, opt);
    std::string wit;
    if (!fr.flat) {
        const ComponentWitness* worst = nullptr;
        for (const auto& c : fr.worst_components)
            if (!worst || (c.label[0] == 'T' ? fr.max_T_plus_d : fr.max_R) >
                              (worst->label[0] == 'T' ? fr.max_T_plus_d : fr.max_R))
                worst = &c;
        if (worst) wit = worst->label + " = " + format_double(worst->value) + " at " + point_text(worst->point);
    }
    r.flatness("flatness", fr.flat, wit);
    r.maximum("max_R", fr.max_R);
    r.maximum("max_T_plus_d", fr.max_T_plus_d);

    ModelExtension m = semidirect_extension(sc.h, sc.rep, sc.k);
    VForm1 eta = assemble_lift(sc.tau, sc.theta, m.cte.ext, m.splitting);
    CurvatureReport cr = curvature(eta, m.cte.z_alg, sc.box, sc.h.dim(), opt);
    r.maximum("lift_curvature_max", cr.max_norm);
    r.verdict("lift-agreement", cr.flat == fr.flat,
              std::string("lift curvature ") + (cr.flat ? "flat" : "not flat"));

    r.details["scenario"] = sc.name;
    r.details["points"] = fr.points;
    r.details["worst_point"] = point_json(fr.worst_point);
    json comps = json::array();
    for (const auto& c : fr.worst_components)
        comps.push_back({{"component", c.label}, {"value", c.value}, {"point", point_json(c.point)}});
    r.details["worst_components"] = comps;
    r.details["z_jacobi"] = fr.z_jacobi_witness ? "fails on " + names_text(m.cte.z_alg, {(*fr.z_jacobi_witness)[0],
                                                                                     (*fr.z_jacobi_witness)[1],
                                                                                     (*fr.z_jacobi_witness)[2]})
                                                : std::string("holds");
}

void cmd_check_integrability(Report& r, const SourceText& src, const SweepOptions& opt) {
    ScenarioInput in = load_scenario(src);
    const Scenario& sc = in.scenario;
    if (!sc.frames) throw InputError(src.label + ": check-integrability needs a [frames] table");
    IntegrabilityReport ir = k_integrability_witness(*sc.frames, sc.k, sc.box, opt);
    std::string wit;
    if (ir.witness)
        wit = "(a,b) = (" + std::to_string((*ir.witness)[0]) + "," + std::to_string((*ir.witness)[1]) + ") at " +
              point_text(ir.worst_point);
    r.verdict("k-integrability", ir.pass, wit);
    r.maximum("max_residual", ir.max_residual);
    r.details["scenario"] = sc.name;
    r.details["k"] = sc.k.name();
    r.details["points"] = ir.points;
}

void cmd_split_check(Report& r, const SourceText& src, double tol, const SweepOptions& opt) {
    ScenarioInput in = load_scenario(src);
    const Scenario& sc = in.scenario;
    r.details["scenario"] = sc.name;
    if (in.second_order) {
        auto rep = second_order_split_check(in.second_order->tau2, sc.tau, sc.theta, in.second_order->model, sc.box, opt);
        r.verdict("second-order-split", rep.max_discrepancy() <= tol, "tolerance " + format_double(tol));
        r.maximum("max_top_discrepancy", rep.max_top_discrepancy);
        r.maximum("max_lower_discrepancy", rep.max_lower_discrepancy);
        r.maximum("max_R2", rep.max_R2);
        r.maximum("max_tau2_wedge_theta1", rep.max_tau2_wedge_theta1);
        r.details["points"] = rep.points;
        r.details["worst_point"] = point_json(rep.worst_point);
        return;
    }
    auto rep = curvature_split_check(sc.tau, sc.theta, sc.h, sc.k, sc.rep, sc.box, opt);
    r.verdict("curvature-split", rep.max_discrepancy() <= tol, "tolerance " + format_double(tol));
    r.maximum("max_h_discrepancy", rep.max_h_discrepancy);
    r.maximum("max_k_discrepancy", rep.max_k_discrepancy);
    r.maximum("max_omega_eta", rep.max_omega_eta);
    r.maximum("max_tau_wedge_theta", rep.max_tau_wedge_theta);
    r.details["points"] = rep.points;
    r.details["worst_point"] = point_json(rep.worst_point);
}

void cmd_groupoid(Report& r, const GroupoidInput& g) {
    FreeTransitiveAction act = g.model == ModelKind::Translations ? FreeTransitiveAction::translations(g.param)
                                                                   : FreeTransitiveAction::heisenberg(g.param);
    const std::uint64_t seed = r.seed;
    r.details["model"] = act.name();

    const double div = divisor_identity_residual(act, g.samples, seed);
    r.verdict("divisor-identities", div <= 1e-12);
    r.maximum("divisor_residual", div);

    const double ax = groupoid_axiom_residual(act, g.samples, seed + 1);
    r.verdict("groupoid-axioms", ax <= 1e-12);
    r.maximum("axiom_residual", ax);

    std::mt19937_64 rng(seed + 2);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<Vec> pts;
    const std::size_t n = act.dim();
    std::size_t total = 1;
    for (std::size_t a = 0; a < n; ++a) total *= 3;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vec x(static_cast<Eigen::Index>(n));
        std::size_t q = idx;
        for (std::size_t a = 0; a < n; ++a, q /= 3) x(static_cast<Eigen::Index>(a)) = static_cast<double>(q % 3) - 1.0;
        pts.push_back(x);
    }
    double hol = 0;
    for (std::size_t b = 0; b < g.bisections; ++b) {
        Vec k(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < k.size(); ++i) k(i) = nd(rng);
        hol = std::max(hol, holonomic_bisection_residual(act, k, pts));
    }
    r.verdict("holonomic-bisections", hol <= 1e-6);
    r.maximum("holonomic_residual", hol);

    MultiplicativityReport mr = multiplicativity_residual(act, g.pairs, g.tangents, seed + 3);
    r.verdict("multiplicativity", mr.max_defect <= 1e-5);
    r.maximum("multiplicativity_defect", mr.max_defect);
    r.maximum("literal_multiplicativity_defect", mr.max_literal_defect);
    r.details["pairs"] = mr.pairs;
    r.details["tangent_samples"] = mr.samples;

    MatrixAlgebra ga = g.model == ModelKind::Translations ? gl(g.param) : sp_k1(g.param);
    ReductiveBuild rb = build_reductive_extension(act, ga.algebra, ga.basis);
    r.maximum("snap_error", rb.max_snap_error);
    r.details["g"] = ga.algebra.name();
    if (!rb.kfrak) {
        r.verdict("reductive-extension", false, "numeric only: constants did not snap");
        return;
    }
    AlmostLieAlgebra expected = g.model == ModelKind::Translations ? AlmostLieAlgebra::abelian(g.param)
                                                                    : heisenberg(g.param);
    bool same = true;
    for (std::size_t i = 0; i < n && same; ++i)
        for (std::size_t j = 0; j < n && same; ++j)
            for (std::size_t k = 0; k < n && same; ++k) same = rb.kfrak->d(i, j, k) == expected.d(i, j, k);
    r.verdict("snapped-constants", same, same ? "" : "snapped constants differ from the closed form");
    r.verdict("reductive-extension", rb.exact, rb.exact ? "" : "check_reductive failed after snapping");
    r.details["z_is_lie"] = rb.model ? is_lie(rb.model->cte.z_alg) : false;
}

void cmd_catalog(Report& r, const std::string& export_dir) {
    json list = json::array();
    for (const auto& e : catalog())
        list.push_back({{"name", e.name}, {"kind", e.kind}, {"sha256", sha256_hex(e.toml)}, {"description", e.description}});
    r.details["entries"] = list;
    r.details["count"] = catalog().size();
    if (!export_dir.empty()) {
        std::filesystem::create_directories(export_dir);
        for (const auto& e : catalog()) {
            std::ofstream f(std::filesystem::path(export_dir) / (e.name + ".toml"), std::ios::binary);
            if (!f) throw InputError("cannot write into '" + export_dir + "'");
            f << e.toml;
        }
    }
}

void emit(const Report& r, const Globals& g, std::ostream& out) {
    if (g.json) {
        out << r.to_json();
        return;
    }
    if (r.command == "extract-bracket" && r.details.contains("k_toml")) {
        Report shown = r;
        shown.details.erase("k_toml");
        out << shown.to_human() << "\n" << r.details["k_toml"].get<std::string>();
        return;
    }
    if (r.command == "catalog") {
        Report shown = r;
        shown.details.erase("entries");
        out << shown.to_human();
        for (const auto& e : catalog()) out << "  " << e.name << " [" << e.kind << "] " << e.description << "\n";
        return;
    }
    out << r.to_human();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cartanlab: exact and numerical checks for transitive geometric structures", "cartanlab"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    std::uint64_t seed_value = 0;
    app.add_flag("--json", g.json, "machine-readable report");
    app.add_option("--threads", g.threads, "worker threads for grid sweeps")->check(CLI::Range(1u, 256u));
    auto* seed_opt = app.add_option("--seed", seed_value, "random seed (default: CARTANLAB_SEED or 0)");

    std::string input, output, export_dir;
    std::optional<std::size_t> expect_order;
    double split_tol = 1e-8;
    std::string model;
    std::size_t model_n = 0, model_k = 0, pairs = 0, tangents = 0;

    auto* c_alg = app.add_subcommand("check-algebra", "antisymmetry and Jacobi identity of an algebra file");
    c_alg->add_option("input", input, "algebra file or catalog:<name>")->required();
    auto* c_ext = app.add_subcommand("check-extension", "exactness, Cartan type and reductivity of an extension");
    c_ext->add_option("input", input, "extension file or catalog:<name>")->required();
    auto* c_extract = app.add_subcommand("extract-bracket", "induced bracket on V of a reductive extension");
    c_extract->add_option("input", input, "extension file or catalog:<name>")->required();
    c_extract->add_option("-o,--output", output, "write the bracket as an algebra file");
    auto* c_tower = app.add_subcommand("tower", "reduction tower and order of Pfaffian group data");
    c_tower->add_option("input", input, "pfaffian file or catalog:<name>")->required();
    c_tower->add_option("--expect-order", expect_order, "fail unless the order matches");
    auto* c_flat = app.add_subcommand("check-flatness", "z-flatness of a scenario");
    c_flat->add_option("input", input, "scenario file or catalog:<name>")->required();
    auto* c_int = app.add_subcommand("check-integrability", "k-integrability of the scenario frames");
    c_int->add_option("input", input, "scenario file or catalog:<name>")->required();
    auto* c_split = app.add_subcommand("split-check", "curvature split identity on a scenario");
    c_split->add_option("input", input, "scenario file or catalog:<name>")->required();
    c_split->add_option("--tol", split_tol, "discrepancy tolerance")->check(CLI::PositiveNumber);
    auto* c_grp = app.add_subcommand("groupoid-check", "action groupoid and Pfaffian form checks");
    c_grp->add_option("input", input, "groupoid file or catalog:<name>");
    c_grp->add_option("--model", model, "translations or heisenberg")->check(CLI::IsMember({"translations", "heisenberg"}));
    c_grp->add_option("--n", model_n, "dimension for translations")->check(CLI::Range(1, 4));
    c_grp->add_option("--k", model_k, "Heisenberg parameter (group dimension 2k+1)")->check(CLI::Range(1, 4));
    c_grp->add_option("--pairs", pairs, "composable pairs for the multiplicativity check");
    c_grp->add_option("--tangents", tangents, "tangent samples per pair");
    auto* c_cat = app.add_subcommand("catalog", "list bundled inputs");
    c_cat->add_option("--export", export_dir, "write every entry to DIR/<name>.toml");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (seed_opt->count() > 0) g.seed = seed_value;

    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    try {
        const std::uint64_t seed = resolve_seed(g);
        const SweepOptions opt{g.threads};
        auto load = [&](const std::string& command) {
            SourceText src = read_source(input);
            r = start(command, src, seed);
            return src;
        };
        if (*c_alg) {
            cmd_check_algebra(r, load("check-algebra"));
        } else if (*c_ext) {
            cmd_check_extension(r, load("check-extension"));
        } else if (*c_extract) {
            cmd_extract_bracket(r, load("extract-bracket"), output);
        } else if (*c_tower) {
            cmd_tower(r, load("tower"), expect_order);
        } else if (*c_flat) {
            cmd_check_flatness(r, load("check-flatness"), opt);
        } else if (*c_int) {
            cmd_check_integrability(r, load("check-integrability"), opt);
        } else if (*c_split) {
            cmd_split_check(r, load("split-check"), split_tol, opt);
        } else if (*c_grp) {
            GroupoidInput gi;
            if (!input.empty()) {
                gi = load_groupoid(load("groupoid-check"));
            } else {
                r.command = "groupoid-check";
                r.seed = seed;
                if (model.empty()) throw InputError("groupoid-check needs an input or --model");
            }
            if (!model.empty()) {
                gi.model = model == "heisenberg" ? ModelKind::Heisenberg : ModelKind::Translations;
                const std::size_t p = gi.model == ModelKind::Heisenberg ? model_k : model_n;
                if (p == 0 && input.empty())
                    throw InputError(gi.model == ModelKind::Heisenberg ? "--model heisenberg needs --k"
                                                                       : "--model translations needs --n");
                if (p != 0) gi.param = p;
            }
            if (pairs) gi.pairs = pairs;
            if (tangents) gi.tangents = tangents;
            cmd_groupoid(r, gi);
        } else if (*c_cat) {
            r.command = "catalog";
            r.seed = seed;
            cmd_catalog(r, export_dir);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(r, g, out);
    return r.failed() ? 1 : 0;
}

}  // namespace cartanlab
