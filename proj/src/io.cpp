#include "cartanlab/io.hpp"

#include "cartanlab/builtin_algebras.hpp"
#include "cartanlab/catalog.hpp"
#include "cartanlab/errors.hpp"

#include <openssl/evp.h>
#include <toml.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace cartanlab {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

SourceText read_source(const std::string& ref, const fs::path& base_dir) {
    SourceText s;
    s.label = ref;
    if (ref.rfind("catalog:", 0) == 0) {
        const auto* e = find_catalog(ref.substr(8));
        if (!e) throw InputError("no catalog entry named '" + ref.substr(8) + "'");
        s.text = e->toml;
    } else {
        fs::path p(ref);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        std::ifstream in(p, std::ios::binary);
        if (!in) throw InputError("cannot read '" + p.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        s.text = ss.str();
        s.base_dir = p.parent_path();
    }
    s.sha256 = sha256_hex(s.text);
    return s;
}

namespace {

toml::table parse_doc(const SourceText& src) {
    try {
        return toml::parse(src.text, src.label);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << src.label << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
        throw InputError(os.str());
    }
}

const toml::table& require_table(const toml::table& t, std::string_view key, const std::string& ctx) {
    const auto* sub = t.get_as<toml::table>(key);
    if (!sub) throw InputError(ctx + ": missing table [" + std::string(key) + "]");
    return *sub;
}

const toml::node& require_node(const toml::table& t, std::string_view key, const std::string& ctx) {
    const auto* n = t.get(key);
    if (!n) throw InputError(ctx + ": missing key '" + std::string(key) + "'");
    return *n;
}

std::string require_string(const toml::table& t, std::string_view key, const std::string& ctx) {
    const auto* n = t.get_as<std::string>(key);
    if (!n) throw InputError(ctx + ": '" + std::string(key) + "' must be a string");
    return n->get();
}

std::size_t as_size(const toml::node& n, const std::string& what) {
    const auto* v = n.as_integer();
    if (!v || v->get() < 0) throw InputError(what + " must be a non-negative integer");
    return static_cast<std::size_t>(v->get());
}

std::optional<std::size_t> optional_size(const toml::table& t, std::string_view key, const std::string& ctx) {
    const auto* n = t.get(key);
    if (!n) return std::nullopt;
    return as_size(*n, ctx + "." + std::string(key));
}

double as_double(const toml::node& n, const std::string& what) {
    if (const auto* f = n.as_floating_point()) return f->get();
    if (const auto* i = n.as_integer()) return static_cast<double>(i->get());
    throw InputError(what + " must be a number");
}

const toml::array& as_array(const toml::node& n, const std::string& what) {
    const auto* a = n.as_array();
    if (!a) throw InputError(what + " must be an array");
    return *a;
}

std::vector<std::string> string_array(const toml::node& n, const std::string& what) {
    std::vector<std::string> out;
    for (const auto& e : as_array(n, what)) {
        const auto* s = e.as_string();
        if (!s) throw InputError(what + " must hold strings");
        out.push_back(s->get());
    }
    return out;
}

std::vector<double> number_array(const toml::node& n, const std::string& what) {
    std::vector<double> out;
    for (const auto& e : as_array(n, what)) out.push_back(as_double(e, what));
    return out;
}

Rational as_rational(const toml::node& n, const std::string& what) {
    if (const auto* i = n.as_integer()) return Rational(i->get());
    if (const auto* s = n.as_string()) return parse_rational(s->get());
    throw InputError(what + ": exact entries must be integers or strings such as \"1/2\"");
}

QMatrix as_matrix(const toml::node& n, std::optional<std::size_t> rows, std::size_t cols, const std::string& what) {
    const auto& a = as_array(n, what);
    if (rows && a.size() != *rows)
        throw InputError(what + ": expected " + std::to_string(*rows) + " rows, got " + std::to_string(a.size()));
    QMatrix m(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& row = as_array(a[i], what);
        if (row.size() != cols)
            throw InputError(what + ": row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = as_rational(row[j], what);
    }
    return m;
}

std::vector<QMatrix> as_matrix_list(const toml::node& n, std::size_t count, std::size_t dim, const std::string& what) {
    const auto& a = as_array(n, what);
    if (a.size() != count)
        throw InputError(what + ": expected " + std::to_string(count) + " matrices, got " + std::to_string(a.size()));
    std::vector<QMatrix> out;
    for (std::size_t j = 0; j < count; ++j) out.push_back(as_matrix(a[j], dim, dim, what));
    return out;
}

std::string expr_text(const toml::node& n, const std::string& what) {
    if (const auto* s = n.as_string()) return s->get();
    if (const auto* i = n.as_integer()) return std::to_string(i->get());
    if (const auto* f = n.as_floating_point()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", f->get());
        return buf;
    }
    throw InputError(what + ": entries must be expression strings or numbers");
}

std::vector<std::vector<std::string>> expr_rows(const toml::node& n, const std::string& what) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : as_array(n, what)) {
        std::vector<std::string> row;
        for (const auto& e : as_array(r, what)) row.push_back(expr_text(e, what));
        rows.push_back(std::move(row));
    }
    return rows;
}

AlgebraInput algebra_from_table(const toml::table& doc, const std::string& ctx);

AlgebraInput resolve_algebra(const toml::node& n, const fs::path& base, const std::string& what) {
    if (const auto* t = n.as_table()) return algebra_from_table(*t, what);
    const auto* s = n.as_string();
    if (!s) throw InputError(what + " must be a reference string or an inline algebra table");
    const std::string ref = s->get();
    if (ref.rfind("builtin:", 0) == 0) {
        std::string spec = ref.substr(8);
        return AlgebraInput{builtin_algebra(spec), spec};
    }
    return load_algebra(read_source(ref, base));
}

LinearRep resolve_rep(const toml::node& n, const AlgebraInput& acting, std::size_t space_dim, const std::string& what) {
    if (const auto* s = n.as_string()) {
        const std::string kind = s->get();
        if (kind == "zero")
            return LinearRep(acting.algebra, space_dim,
                             std::vector<QMatrix>(acting.algebra.dim(), QMatrix(space_dim, space_dim)));
        if (kind == "adjoint") {
            if (acting.algebra.dim() != space_dim) throw InputError(what + ": adjoint rep needs matching dimensions");
            return adjoint_rep(acting.algebra);
        }
        if (kind == "standard") {
            if (!acting.builtin) throw InputError(what + ": 'standard' needs a builtin matrix algebra");
            LinearRep r = builtin_standard_rep(*acting.builtin);
            if (r.space_dim != space_dim)
                throw InputError(what + ": standard rep acts on dimension " + std::to_string(r.space_dim) + ", expected " +
                                 std::to_string(space_dim));
            return r;
        }
        throw InputError(what + ": unknown representation '" + kind + "'");
    }
    return LinearRep(acting.algebra, space_dim, as_matrix_list(n, acting.algebra.dim(), space_dim, what));
}

AlgebraInput algebra_from_table(const toml::table& doc, const std::string& ctx) {
    const toml::table& a = doc.contains("algebra") ? require_table(doc, "algebra", ctx) : doc;
    if (const auto* b = a.get_as<std::string>("builtin")) {
        std::string spec = b->get();
        return AlgebraInput{builtin_algebra(spec), spec};
    }
    const std::size_t dim = as_size(require_node(a, "dim", ctx), ctx + ".dim");
    if (dim == 0) throw InputError(ctx + ": dim must be positive");
    std::string name = a.contains("name") ? require_string(a, "name", ctx) : "algebra";
    std::vector<std::string> basis;
    if (const auto* n = a.get("basis")) {
        basis = string_array(*n, ctx + ".basis");
        if (basis.size() != dim) throw InputError(ctx + ": basis has " + std::to_string(basis.size()) + " names, dim is " +
                                                 std::to_string(dim));
    } else {
        for (std::size_t i = 0; i < dim; ++i) basis.push_back("e" + std::to_string(i + 1));
    }
    std::vector<Rational> sc(dim * dim * dim, Rational(0));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    if (const auto* brs = doc.get("bracket")) {
        for (const auto& bn : as_array(*brs, ctx + ".bracket")) {
            const auto* b = bn.as_table();
            if (!b) throw InputError(ctx + ": [[bracket]] entries must be tables");
            const std::size_t j = as_size(require_node(*b, "j", ctx), "bracket.j");
            const std::size_t k = as_size(require_node(*b, "k", ctx), "bracket.k");
            if (j < 1 || j > dim || k < 1 || k > dim)
                throw InputError(ctx + ": bracket index out of range 1.." + std::to_string(dim));
            if (!seen.insert({j, k}).second) throw InputError(ctx + ": bracket (" + std::to_string(j) + "," +
                                                             std::to_string(k) + ") given twice");
            QVec v = zero_vec(dim);
            for (const auto& rn : as_array(require_node(*b, "result", ctx), "bracket.result")) {
                const auto* r = rn.as_table();
                if (!r) throw InputError(ctx + ": bracket result entries must be tables {i, coeff}");
                const std::size_t i = as_size(require_node(*r, "i", ctx), "result.i");
                if (i < 1 || i > dim) throw InputError(ctx + ": result index out of range");
                v[i - 1] += as_rational(require_node(*r, "coeff", ctx), "result.coeff");
            }
            if (j == k && !is_zero(v))
                throw InputError(ctx + ": bracket of basis element " + std::to_string(j) + " with itself must vanish");
            const bool mirrored = seen.count({k, j}) > 0 && j != k;
            for (std::size_t i = 0; i < dim; ++i) {
                Rational& fwd = sc[(i * dim + (j - 1)) * dim + (k - 1)];
                Rational& bwd = sc[(i * dim + (k - 1)) * dim + (j - 1)];
                if (mirrored && fwd != v[i])
                    throw InputError(ctx + ": brackets (" + std::to_string(j) + "," + std::to_string(k) + ") and (" +
                                     std::to_string(k) + "," + std::to_string(j) + ") are not antisymmetric");
                fwd = v[i];
                bwd = -v[i];
            }
        }
    }
    return AlgebraInput{AlmostLieAlgebra(std::move(name), std::move(basis), std::move(sc)), std::nullopt};
}

std::size_t require_positive(const toml::table& t, std::string_view key, const std::string& ctx) {
    auto v = as_size(require_node(t, key, ctx), ctx + "." + std::string(key));
    if (v == 0) throw InputError(ctx + "." + std::string(key) + " must be positive");
    return v;
}

}  // namespace

AlgebraInput load_algebra(const SourceText& src) {
    toml::table doc = parse_doc(src);
    if (!doc.contains("algebra")) throw InputError(src.label + ": missing table [algebra]");
    return algebra_from_table(doc, src.label);
}

std::string algebra_to_toml(const AlmostLieAlgebra& alg) {
    std::ostringstream os;
    const std::size_t n = alg.dim();
    os << "[algebra]\nname = \"" << alg.name() << "\"\ndim = " << n << "\nbasis = [";
    for (std::size_t i = 0; i < n; ++i) os << (i ? ", " : "") << '"' << alg.basis_names()[i] << '"';
    os << "]\n";
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            QVec v = alg.basis_bracket(j, k);
            if (is_zero(v)) continue;
            os << "\n[[bracket]]\nj = " << j + 1 << "\nk = " << k + 1 << "\nresult = [";
            bool first = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (v[i] == 0) continue;
                os << (first ? "" : ", ") << "{ i = " << i + 1 << ", coeff = \"" << to_string(v[i]) << "\" }";
                first = false;
            }
            os << "]\n";
        }
    return os.str();
}

ExtensionInput load_extension(const SourceText& src) {
    toml::table doc = parse_doc(src);
    const std::string ctx = src.label + " [extension]";
    const auto& e = require_table(doc, "extension", src.label);
    ExtensionInput out;
    out.name = e.contains("name") ? require_string(e, "name", ctx) : src.label;
    const std::string kind = e.contains("kind") ? require_string(e, "kind", ctx) : "semidirect";
    std::size_t h_dim = 0, z_dim = 0, v_dim = 0;
    if (kind == "semidirect") {
        auto h = resolve_algebra(require_node(e, "h_algebra", ctx), src.base_dir, ctx + ".h_algebra");
        auto k = resolve_algebra(require_node(e, "k_algebra", ctx), src.base_dir, ctx + ".k_algebra");
        LinearRep rep = resolve_rep(require_node(e, "rep", ctx), h, k.algebra.dim(), ctx + ".rep");
        ModelExtension m = semidirect_extension(h.algebra, rep, k.algebra);
        out.cte = m.cte;
        h_dim = h.algebra.dim();
        v_dim = k.algebra.dim();
        z_dim = h_dim + v_dim;
        if (!e.contains("l") && !e.contains("r")) out.left = LeftSplitting{m.splitting.l};
    } else if (kind == "explicit") {
        auto acting = resolve_algebra(require_node(e, "acting", ctx), src.base_dir, ctx + ".acting");
        auto h = resolve_algebra(require_node(e, "h_algebra", ctx), src.base_dir, ctx + ".h_algebra");
        auto z = resolve_algebra(require_node(e, "z_bracket", ctx), src.base_dir, ctx + ".z_bracket");
        h_dim = h.algebra.dim();
        z_dim = z.algebra.dim();
        if (z_dim < h_dim) throw InputError(ctx + ": z is smaller than h");
        v_dim = z_dim - h_dim;
        QMatrix i = as_matrix(require_node(e, "i", ctx), z_dim, h_dim, ctx + ".i");
        QMatrix p = as_matrix(require_node(e, "p", ctx), v_dim, z_dim, ctx + ".p");
        QMatrix emb;
        if (const auto* n = e.get("h_in_acting")) {
            emb = as_matrix(*n, acting.algebra.dim(), h_dim, ctx + ".h_in_acting");
        } else {
            if (acting.algebra.dim() != h_dim) throw InputError(ctx + ": h_in_acting is required when acting differs from h");
            emb = QMatrix::identity(h_dim);
        }
        RepExtension ext{acting.algebra,
                         resolve_rep(require_node(e, "rep_h", ctx), acting, h_dim, ctx + ".rep_h"),
                         resolve_rep(require_node(e, "rep_z", ctx), acting, z_dim, ctx + ".rep_z"),
                         resolve_rep(require_node(e, "rep_v", ctx), acting, v_dim, ctx + ".rep_v"),
                         std::move(i), std::move(p)};
        out.cte = CartanTypeExtension{std::move(ext), h.algebra, z.algebra, std::move(emb)};
    } else {
        throw InputError(ctx + ": kind must be \"semidirect\" or \"explicit\"");
    }
    if (e.contains("l") && e.contains("r")) throw InputError(ctx + ": give either l or r, not both");
    if (const auto* n = e.get("l")) out.left = LeftSplitting{as_matrix(*n, h_dim, z_dim, ctx + ".l")};
    if (const auto* n = e.get("r")) out.right = RightSplitting{as_matrix(*n, z_dim, v_dim, ctx + ".r")};
    return out;
}

PfaffianInput load_pfaffian(const SourceText& src) {
    toml::table doc = parse_doc(src);
    const std::string ctx = src.label + " [pfaffian]";
    const auto& t = require_table(doc, "pfaffian", src.label);
    PfaffianInput out;
    out.name = t.contains("name") ? require_string(t, "name", ctx) : src.label;
    out.expected_order = optional_size(t, "expected_order", ctx);
    if (const auto* b = t.get_as<std::string>("builtin")) {
        const std::string spec = b->get();
        const std::string prefix = "second_order(";
        if (spec.rfind(prefix, 0) != 0 || spec.back() != ')')
            throw InputError(ctx + ": unknown builtin '" + spec + "'");
        std::size_t n = 0;
        try {
            n = std::stoul(spec.substr(prefix.size(), spec.size() - prefix.size() - 1));
        } catch (const std::exception&) {
            throw InputError(ctx + ": bad size in '" + spec + "'");
        }
        if (n < 1 || n > 4) throw InputError(ctx + ": second_order(n) supports 1 <= n <= 4");
        out.data = second_order_pfaffian(n);
        return out;
    }
    auto g = resolve_algebra(require_node(t, "g", ctx), src.base_dir, ctx + ".g");
    const std::size_t v = require_positive(t, "v_dim", ctx);
    LinearRep rho = resolve_rep(require_node(t, "rho", ctx), g, v, ctx + ".rho");
    QMatrix l = as_matrix(require_node(t, "l", ctx), v, g.algebra.dim(), ctx + ".l");
    out.data = PfaffianGroupData{g.algebra, std::move(rho), std::move(l)};
    return out;
}

ScenarioInput load_scenario(const SourceText& src) {
    toml::table doc = parse_doc(src);
    const std::string& ctx = src.label;
    ScenarioInput out;
    Scenario& sc = out.scenario;
    sc.name = src.label;
    if (const auto* s = doc.get_as<toml::table>("scenario"))
        if (const auto* nm = s->get_as<std::string>("name")) sc.name = nm->get();

    const auto& chart = require_table(doc, "chart", ctx);
    sc.box.coords = string_array(require_node(chart, "coords", ctx), "chart.coords");
    sc.box.lo = number_array(require_node(chart, "lo", ctx), "chart.lo");
    sc.box.hi = number_array(require_node(chart, "hi", ctx), "chart.hi");
    if (auto g = optional_size(chart, "grid", "chart")) sc.box.grid = *g;
    if (const auto* n = chart.get("fd_step")) sc.box.fd_step = as_double(*n, "chart.fd_step");
    if (const auto* n = chart.get("tol")) sc.box.tol = as_double(*n, "chart.tol");
    sc.box.validate();
    const auto& coords = sc.box.coords;

    const auto& model = require_table(doc, "model", ctx);
    if (auto order2 = optional_size(model, "second_order", "model")) {
        if (*order2 != coords.size()) throw InputError(ctx + ": model.second_order must equal the chart dimension");
        SecondOrderInput so{second_order_model(*order2), {}};
        sc.h = so.model.g1;
        sc.k = AlmostLieAlgebra::abelian(*order2, "R" + std::to_string(*order2), "x");
        sc.rep = LinearRep(sc.h, *order2, so.model.g1_matrices);
        const std::size_t h2 = so.model.model.cte.h_alg.dim();
        if (const auto* c2 = doc.get_as<toml::table>("connection2"))
            so.tau2 = VForm1::parse(expr_rows(require_node(*c2, "rows", ctx), "connection2.rows"), coords);
        else
            so.tau2 = VForm1::zero(h2, coords);
        if (so.tau2.m != h2) throw InputError(ctx + ": connection2 needs " + std::to_string(h2) + " rows");
        out.second_order = std::move(so);
    } else {
        auto h = resolve_algebra(require_node(model, "h_algebra", ctx), src.base_dir, "model.h_algebra");
        auto k = resolve_algebra(require_node(model, "k_algebra", ctx), src.base_dir, "model.k_algebra");
        sc.rep = resolve_rep(require_node(model, "rep", ctx), h, k.algebra.dim(), "model.rep");
        sc.h = h.algebra;
        sc.k = k.algebra;
    }

    const auto& cof = require_table(doc, "coframe", ctx);
    sc.theta = VForm1::parse(expr_rows(require_node(cof, "rows", ctx), "coframe.rows"), coords);
    if (const auto* con = doc.get_as<toml::table>("connection"))
        sc.tau = VForm1::parse(expr_rows(require_node(*con, "rows", ctx), "connection.rows"), coords);
    else
        sc.tau = VForm1::zero(sc.h.dim(), coords);
    if (const auto* fr = doc.get_as<toml::table>("frames"))
        sc.frames = FrameField::parse(expr_rows(require_node(*fr, "fields", ctx), "frames.fields"), coords);
    try {
        sc.validate();
    } catch (const DimensionMismatch& e) {
        throw InputError(ctx + ": " + e.what());
    }
    return out;
}

GroupoidInput load_groupoid(const SourceText& src) {
    toml::table doc = parse_doc(src);
    const std::string ctx = src.label + " [groupoid]";
    const auto& t = require_table(doc, "groupoid", src.label);
    GroupoidInput g;
    const std::string model = require_string(t, "model", ctx);
    if (model == "translations") {
        g.model = ModelKind::Translations;
        g.param = require_positive(t, "n", ctx);
    } else if (model == "heisenberg") {
        g.model = ModelKind::Heisenberg;
        g.param = require_positive(t, "k", ctx);
    } else {
        throw InputError(ctx + ": model must be \"translations\" or \"heisenberg\"");
    }
    if (g.param > 4) throw InputError(ctx + ": model size is limited to 4");
    if (auto v = optional_size(t, "pairs", ctx)) g.pairs = *v;
    if (auto v = optional_size(t, "tangents", ctx)) g.tangents = *v;
    if (auto v = optional_size(t, "bisections", ctx)) g.bisections = *v;
    if (auto v = optional_size(t, "samples", ctx)) g.samples = *v;
    return g;
}

std::string document_kind(const SourceText& src) {
    toml::table doc = parse_doc(src);
    for (const char* k : {"algebra", "extension", "pfaffian", "groupoid"})
        if (doc.contains(k)) return k;
    if (doc.contains("chart")) return "scenario";
    throw InputError(src.label + ": unrecognised document (no [algebra], [extension], [pfaffian], [chart] or [groupoid])");
}

}  // namespace cartanlab
