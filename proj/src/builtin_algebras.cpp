#include "cartanlab/builtin_algebras.hpp"

#include "cartanlab/errors.hpp"
#include "cartanlab/jet.hpp"

#include <regex>

namespace cartanlab {

namespace {

QMatrix unit_matrix(std::size_t n, std::size_t i, std::size_t j) {
    QMatrix m(n, n);
    m(i, j) = 1;
    return m;
}

QVec flatten(const QMatrix& m) {
    QVec v;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    return v;
}

QMatrix unflatten(std::size_t n, const QVec& v) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return m;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t count) {
    std::vector<std::string> r;
    for (std::size_t i = 0; i < count; ++i) r.push_back(prefix + std::to_string(i + 1));
    return r;
}

}  // namespace

LinearRep MatrixAlgebra::standard_rep() const { return LinearRep(algebra, size, basis); }

MatrixAlgebra matrix_algebra(std::string name, std::vector<std::string> names, std::vector<QMatrix> basis) {
    if (basis.empty()) return MatrixAlgebra{AlmostLieAlgebra(std::move(name), {}, {}), {}, 0};
    const std::size_t n = basis.front().rows();
    std::vector<QVec> cols;
    for (const auto& b : basis) cols.push_back(flatten(b));
    QMatrix coords = QMatrix::from_columns(n * n, cols);
    if (rank(coords) != basis.size()) throw DimensionMismatch("matrix algebra basis is dependent");
    auto alg = AlmostLieAlgebra::from_brackets(std::move(name), std::move(names), [&](std::size_t j, std::size_t k) {
        auto c = solve(coords, flatten(commutator(basis[j], basis[k])));
        if (!c) throw Error("matrix span is not closed under the commutator");
        return *c;
    });
    return MatrixAlgebra{std::move(alg), std::move(basis), n};
}

MatrixAlgebra gl(std::size_t n) {
    std::vector<QMatrix> b;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            b.push_back(unit_matrix(n, i, j));
            names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    return matrix_algebra("gl(" + std::to_string(n) + ")", std::move(names), std::move(b));
}

MatrixAlgebra sl(std::size_t n) {
    std::vector<QMatrix> b;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) {
                b.push_back(unit_matrix(n, i, j));
                names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
            }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b.push_back(unit_matrix(n, i, i) - unit_matrix(n, n - 1, n - 1));
        names.push_back("H" + std::to_string(i + 1));
    }
    return matrix_algebra("sl(" + std::to_string(n) + ")", std::move(names), std::move(b));
}

MatrixAlgebra so(std::size_t n) {
    std::vector<QMatrix> b;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            b.push_back(unit_matrix(n, i, j) - unit_matrix(n, j, i));
            names.push_back("L" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    return matrix_algebra("so(" + std::to_string(n) + ")", std::move(names), std::move(b));
}

QMatrix symplectic_form(std::size_t k) {
    QMatrix j(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        j(i, k + i) = 1;
        j(k + i, i) = -1;
    }
    return j;
}

MatrixAlgebra sp(std::size_t k) {
    const std::size_t n = 2 * k;
    const QMatrix J = symplectic_form(k);
    // Linear map a -> a^T J + J a on flattened entries.
    QMatrix cond(n * n, n * n);
    for (std::size_t e = 0; e < n * n; ++e) {
        QMatrix a = unit_matrix(n, e / n, e % n);
        QVec img = flatten(a.transpose() * J + J * a);
        for (std::size_t r = 0; r < n * n; ++r) cond(r, e) = img[r];
    }
    auto ker = kernel_of_linear_map(cond);
    std::vector<QMatrix> b;
    for (const auto& v : ker.basis()) b.push_back(unflatten(n, v));
    auto names = numbered("s", b.size());
    return matrix_algebra("sp(" + std::to_string(k) + ")", std::move(names), std::move(b));
}

MatrixAlgebra sp_k1(std::size_t k) {
    const std::size_t n = 2 * k + 1;
    auto inner = sp(k);
    std::vector<QMatrix> b;
    std::vector<std::string> names;
    for (std::size_t a = 0; a < inner.basis.size(); ++a) {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < 2 * k; ++i)
            for (std::size_t j = 0; j < 2 * k; ++j) m(i, j) = inner.basis[a](i, j);
        b.push_back(std::move(m));
        names.push_back("a" + std::to_string(a + 1));
    }
    for (std::size_t i = 0; i < 2 * k; ++i) {
        b.push_back(unit_matrix(n, i, 2 * k));
        names.push_back("b" + std::to_string(i + 1));
    }
    b.push_back(unit_matrix(n, 2 * k, 2 * k));
    names.push_back("c");
    return matrix_algebra("sp(" + std::to_string(k) + ",1)", std::move(names), std::move(b));
}

AlmostLieAlgebra heisenberg(std::size_t k) {
    const std::size_t n = 2 * k + 1;
    return AlmostLieAlgebra::from_brackets("hei" + std::to_string(n), numbered("e", n),
                                           [&](std::size_t j, std::size_t l) {
                                               QVec v = zero_vec(n);
                                               if (j < k && l == j + k) v[n - 1] = 1;
                                               if (l < k && j == l + k) v[n - 1] = -1;
                                               return v;
                                           });
}

namespace {

struct ParsedSpec {
    std::string family;
    std::size_t a = 0;
    std::size_t b = 0;
    bool two_args = false;
};

ParsedSpec parse_spec(const std::string& spec) {
    static const std::regex re(R"(^\s*([a-z][a-z0-9]*?)\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$)");
    std::smatch m;
    if (!std::regex_match(spec, m, re)) throw InputError("unrecognised builtin algebra '" + spec + "'");
    ParsedSpec p;
    p.family = m[1];
    p.a = std::stoul(m[2]);
    if (m[3].matched) {
        p.two_args = true;
        p.b = std::stoul(m[3]);
    }
    const std::size_t limit = 8;
    if (p.a > limit) throw InputError("builtin algebra '" + spec + "' is too large");
    return p;
}

}  // namespace

AlmostLieAlgebra builtin_algebra(const std::string& spec) {
    auto p = parse_spec(spec);
    if (p.family == "ab" && !p.two_args) return AlmostLieAlgebra::abelian(p.a);
    if (p.family == "hei" && !p.two_args) {
        if (p.a % 2 == 0 || p.a < 3) throw InputError("hei(n) needs odd n >= 3");
        return heisenberg((p.a - 1) / 2);
    }
    if (p.family == "jet2" && !p.two_args && p.a >= 1) return jet2_algebra(p.a);
    return builtin_standard_rep(spec).algebra;
}

LinearRep builtin_standard_rep(const std::string& spec) {
    auto p = parse_spec(spec);
    if (p.a == 0) throw InputError("builtin algebra '" + spec + "' needs a positive size");
    if (p.two_args) {
        if (p.family == "sp" && p.b == 1) return sp_k1(p.a).standard_rep();
        throw InputError("unrecognised builtin algebra '" + spec + "'");
    }
    if (p.family == "gl") return gl(p.a).standard_rep();
    if (p.family == "sl") return sl(p.a).standard_rep();
    if (p.family == "so") return so(p.a).standard_rep();
    if (p.family == "sp") return sp(p.a).standard_rep();
    throw InputError("builtin '" + spec + "' has no standard representation");
}

}  // namespace cartanlab
