// Acceptance gate: one PASS/FAIL line per criterion, with wall time against its budget.
#include "../unit/helpers.hpp"

#include "cartanlab/cli.hpp"
#include "cartanlab/coframe.hpp"
#include "cartanlab/groupoid.hpp"
#include "cartanlab/jet.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace cartanlab;
using namespace testing_support;

namespace {

struct Outcome {
    bool ok = true;
    std::string note;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            note = what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.ok = false;
        o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs >= budget_s) {
        o.ok = false;
        o.note = "over time budget";
    }
    if (!o.ok) ++failures;
    std::printf("%s  %d  %-44s %7.3f s (budget %.0f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs,
                budget_s, o.note.empty() ? "" : "  ", o.note.c_str());
    std::fflush(stdout);
}

ChartBox cube(std::vector<std::string> coords, std::size_t grid) {
    ChartBox b;
    b.lo.assign(coords.size(), -1.0);
    b.hi.assign(coords.size(), 1.0);
    b.coords = std::move(coords);
    b.grid = grid;
    b.fd_step = 1e-4;
    b.tol = 1e-6;
    return b;
}

std::string random_poly(std::mt19937_64& rng, const std::vector<std::string>& coords) {
    std::vector<std::string> monos{"1"};
    for (std::size_t a = 0; a < coords.size(); ++a) {
        monos.push_back(coords[a]);
        for (std::size_t b = a; b < coords.size(); ++b) monos.push_back(coords[a] + "*" + coords[b]);
    }
    std::uniform_int_distribution<int> num(-3, 3), den(1, 4), coin(0, 1);
    std::string s = "0";
    for (const auto& m : monos)
        if (coin(rng) == 0) s += " + (" + std::to_string(num(rng)) + "/" + std::to_string(den(rng)) + ")*" + m;
    return s;
}

VForm1 random_form(std::mt19937_64& rng, std::size_t m, const std::vector<std::string>& coords) {
    std::vector<std::vector<std::string>> rows(m, std::vector<std::string>(coords.size()));
    for (auto& r : rows)
        for (auto& c : r) c = random_poly(rng, coords);
    return VForm1::parse(rows, coords);
}

const std::vector<std::string> kXYZ{"x", "y", "z"};

Scenario contact(const AlmostLieAlgebra& k) {
    auto s = sp_k1(1);
    Scenario sc;
    sc.name = "contact";
    sc.box = cube(kXYZ, 9);
    sc.theta = VForm1::parse({{"0", "1", "0"}, {"1", "0", "0"}, {"-y", "0", "1"}}, kXYZ);
    sc.tau = VForm1::zero(6, kXYZ);
    sc.h = s.algebra;
    sc.k = k;
    sc.rep = s.standard_rep();
    sc.frames = FrameField::parse({{"0", "1", "0"}, {"1", "0", "y"}, {"0", "0", "1"}}, kXYZ);
    return sc;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

std::string cli_json(std::vector<std::string> args) {
    std::ostringstream out, err;
    run(args, out, err);
    return out.str();
}

}  // namespace

int main() {
    criterion(1, "exact Lie algebra suite", 1, [] {
        Outcome o;
        o.require(is_lie(heisenberg(1)), "hei3 not Lie");
        o.require(is_lie(sp_k1(1).algebra), "sp(1,1) not Lie");
        for (std::size_t n = 1; n <= 3; ++n) o.require(is_lie(gl(n).algebra), "gl not Lie");
        for (std::size_t n = 2; n <= 3; ++n) o.require(is_lie(so(n).algebra), "so not Lie");
        for (std::size_t n = 1; n <= 2; ++n) o.require(is_lie(jet2_algebra(n)), "jet2 not Lie");
        auto s = sp_k1(1);
        auto z = semidirect(s.algebra, s.standard_rep(), heisenberg(1));
        auto w = jacobi_witness(z);
        o.require(w.has_value(), "sp(1,1) |x hei3 reported Lie");
        if (w) {
            const std::size_t d = z.dim();
            o.require(!is_zero(jacobiator(z, unit_vec(d, (*w)[0]), unit_vec(d, (*w)[1]), unit_vec(d, (*w)[2]))),
                      "witness triple has zero jacobiator");
            o.note = "witness (" + z.basis_names()[(*w)[0]] + "," + z.basis_names()[(*w)[1]] + "," +
                     z.basis_names()[(*w)[2]] + ")";
        }
        return o;
    });

    criterion(2, "reductive round trip, 100 random h |x k", 5, [] {
        Outcome o;
        std::mt19937_64 rng(20240101);
        std::uniform_int_distribution<std::size_t> dim(1, 4);
        for (int t = 0; t < 100; ++t) {
            const std::size_t dh = dim(rng), dk = dim(rng);
            auto h = random_almost_lie(rng, dh, "h");
            auto k = random_almost_lie(rng, dk, "k");
            std::vector<QMatrix> mats;
            for (std::size_t a = 0; a < dh; ++a) {
                QMatrix m(dk, dk);
                for (std::size_t i = 0; i < dk; ++i)
                    for (std::size_t j = 0; j < dk; ++j) m(i, j) = random_rational(rng);
                mats.push_back(m);
            }
            QMatrix P;
            do {
                P = QMatrix(dh + dk, dh + dk);
                for (std::size_t i = 0; i < dh + dk; ++i)
                    for (std::size_t j = 0; j < dh + dk; ++j) P(i, j) = random_rational(rng, 2, 2);
            } while (rank(P) != dh + dk);
            auto m = change_z_basis(semidirect_extension(h, LinearRep(h, dk, mats), k), P);
            o.require(induced_quotient_bracket(m.cte, m.splitting).structure_constants() == k.structure_constants(),
                      "induced bracket differs from k");
            o.require(semidirect_iso_check(m.cte, m.splitting).ok, "semidirect iso check failed");
        }
        return o;
    });

    criterion(3, "second-order models reductive, order 2", 2, [] {
        Outcome o;
        for (std::size_t n = 1; n <= 2; ++n) {
            auto som = second_order_model(n);
            o.require(check_reductive(som.model.cte, som.model.splitting).ok(), "second-order model not reductive");
            o.require(reduction_tower(second_order_pfaffian(n)).order == 2, "tower order is not 2");
        }
        return o;
    });

    criterion(4, "contact flatness hei3 / abelian", 10, [] {
        Outcome o;
        auto flat = flatness_check(contact(heisenberg(1)));
        o.require(flat.flat && flat.max_T_plus_d <= 1e-6 && flat.max_R <= 1e-6, "hei3 scenario not FLAT");
        auto nf = flatness_check(contact(AlmostLieAlgebra::abelian(3)));
        o.require(!nf.flat, "abelian scenario reported FLAT");
        o.require(!nf.worst_components.empty() && nf.worst_components[0].label == "T^3_12" &&
                      std::abs(nf.worst_components[0].value + 1) <= 1e-6,
                  "torsion witness is not T^3_12 = -1");
        o.note = "max|T+d| " + fmt(flat.max_T_plus_d) + ", witness T^3_12 = " +
                 fmt(nf.worst_components.empty() ? 0 : nf.worst_components[0].value);
        return o;
    });

    criterion(5, "curvature split identities", 30, [] {
        Outcome o;
        std::mt19937_64 rng(5);
        auto s = sp_k1(1);
        auto box3 = cube(kXYZ, 9);
        double worst = 0;
        for (int t = 0; t < 20; ++t) {
            auto rep = curvature_split_check(random_form(rng, 6, kXYZ), random_form(rng, 3, kXYZ), s.algebra,
                                             heisenberg(1), s.standard_rep(), box3);
            worst = std::max(worst, rep.max_discrepancy());
        }
        o.require(worst <= 1e-8, "split discrepancy " + fmt(worst));
        const std::vector<std::string> xy{"x", "y"};
        auto som = second_order_model(2);
        auto box2 = cube(xy, 9);
        double worst2 = 0;
        for (int t = 0; t < 10; ++t) {
            auto rep = second_order_split_check(random_form(rng, 6, xy), random_form(rng, 4, xy),
                                                random_form(rng, 2, xy), som, box2);
            worst2 = std::max(worst2, rep.max_discrepancy());
        }
        o.require(worst2 <= 1e-8, "second-order discrepancy " + fmt(worst2));
        if (o.ok) o.note = "max discrepancy " + fmt(worst) + " / " + fmt(worst2);
        return o;
    });

    criterion(6, "contact frames hei3-integrable, FD order 2", 10, [] {
        Outcome o;
        auto sc = contact(heisenberg(1));
        o.require(k_integrability_witness(*sc.frames, heisenberg(1), sc.box).pass, "hei3 integrability fails");
        auto fail = k_integrability_witness(*sc.frames, AlmostLieAlgebra::abelian(3), sc.box);
        o.require(!fail.pass && fail.witness && (*fail.witness)[0] == 1 && (*fail.witness)[1] == 2,
                  "abelian witness is not (1,2)");
        const std::vector<std::string> xy{"x", "y"};
        double r = fd_convergence_ratio(VForm1::parse({{"exp(y)*sin(x)", "x*cos(y)"}, {"0", "1"}}, xy),
                                        Point{0.3, -0.2}, 1e-2);
        o.require(r >= 3.5 && r <= 4.5, "convergence ratio " + fmt(r));
        if (o.ok) o.note = "ratio " + fmt(r);
        return o;
    });

    criterion(7, "action groupoid suite", 30, [] {
        Outcome o;
        std::mt19937_64 rng(7);
        std::normal_distribution<double> nd;
        for (const auto& act : {FreeTransitiveAction::translations(2), FreeTransitiveAction::heisenberg(1)}) {
            o.require(divisor_identity_residual(act, 1000, 1) <= 1e-12, act.name() + " divisor identities");
            o.require(groupoid_axiom_residual(act, 1000, 2) <= 1e-12, act.name() + " groupoid axioms");
            std::vector<Vec> pts;
            for (int i = 0; i < 10; ++i) pts.push_back(Vec::NullaryExpr(static_cast<Eigen::Index>(act.dim()), [&] { return nd(rng); }));
            for (int t = 0; t < 20; ++t) {
                Vec k = Vec::NullaryExpr(static_cast<Eigen::Index>(act.dim()), [&] { return nd(rng); });
                o.require(holonomic_bisection_residual(act, k, pts) <= 1e-6, act.name() + " holonomic residual");
            }
            auto m = multiplicativity_residual(act, 200, 4, 3);
            o.require(m.max_defect <= 1e-5, act.name() + " multiplicativity " + fmt(m.max_defect));
        }
        auto s = sp_k1(1);
        auto b = build_reductive_extension(FreeTransitiveAction::heisenberg(1), s.algebra, s.basis);
        o.require(b.exact && b.kfrak && b.kfrak->structure_constants() == heisenberg(1).structure_constants(),
                  "constants do not snap to hei3");
        o.require(b.check && b.check->ok(), "built extension not reductive");
        return o;
    });

    criterion(8, "byte-identical JSON with fixed seed", 30, [] {
        Outcome o;
        const std::vector<std::vector<std::string>> cmds{
            {"--json", "--seed", "42", "groupoid-check", "--model", "heisenberg", "--k", "1", "--pairs", "50"},
            {"--json", "--seed", "42", "groupoid-check", "catalog:translations_groupoid"},
            {"--json", "check-flatness", "catalog:contact_abelian"},
            {"--json", "check-integrability", "catalog:contact_hei"},
            {"--json", "split-check", "catalog:jet2_split"},
            {"--json", "check-extension", "catalog:sp11_hei_perturbed"},
            {"--json", "tower", "catalog:jet2_model"},
        };
        for (const auto& c : cmds) {
            std::string a = cli_json(c), b = cli_json(c);
            auto threaded = c;
            threaded.insert(threaded.begin(), {"--threads", "4"});
            o.require(!a.empty() && a == b && a == cli_json(threaded), "reports differ for " + c[c.size() > 3 ? 3 : 1]);
        }
        return o;
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
