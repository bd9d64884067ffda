#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <string>
#include <string_view>
#include <vector>

namespace cartanlab {

/// Exact rational number; always reduced with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using QVec = std::vector<Rational>;

/// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25" or "-1.5e-2".
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

QVec zero_vec(std::size_t n);
QVec unit_vec(std::size_t n, std::size_t i);
bool is_zero(const QVec& v);

QVec operator+(const QVec& a, const QVec& b);
QVec operator-(const QVec& a, const QVec& b);
QVec scale(const Rational& s, const QVec& a);

/// Exact scalar type only; keeps unrelated operands from probing conversions to Rational.
template <std::same_as<Rational> S>
QVec operator*(const S& s, const QVec& a) {
    return scale(s, a);
}

}  // namespace cartanlab
