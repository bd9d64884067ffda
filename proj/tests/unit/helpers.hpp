#pragma once

#include "cartanlab/algebra.hpp"
#include "cartanlab/builtin_algebras.hpp"

#include <Eigen/Dense>

#include <random>

namespace testing_support {

using namespace cartanlab;

inline Rational random_rational(std::mt19937_64& rng, int range = 5, int max_den = 4) {
    std::uniform_int_distribution<int> num(-range, range), den(1, max_den);
    return Rational(num(rng)) / Rational(den(rng));
}

inline QVec random_qvec(std::mt19937_64& rng, std::size_t n) {
    QVec v(n);
    for (auto& x : v) x = random_rational(rng);
    return v;
}

/// Random antisymmetric structure constants with entries in {-2..2}, sparse.
inline AlmostLieAlgebra random_almost_lie(std::mt19937_64& rng, std::size_t dim, const std::string& name) {
    std::vector<Rational> sc(dim * dim * dim, Rational(0));
    std::uniform_int_distribution<int> v(-2, 2), coin(0, 2);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t k = j + 1; k < dim; ++k)
            for (std::size_t i = 0; i < dim; ++i) {
                if (coin(rng) != 0) continue;
                Rational c(v(rng));
                sc[(i * dim + j) * dim + k] = c;
                sc[(i * dim + k) * dim + j] = -c;
            }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < dim; ++i) names.push_back("e" + std::to_string(i + 1));
    return AlmostLieAlgebra(name, names, sc);
}

inline Eigen::MatrixXd numeric(const QMatrix& m) {
    Eigen::MatrixXd r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
    return r;
}

}  // namespace testing_support
