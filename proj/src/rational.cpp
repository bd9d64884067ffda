#include "cartanlab/rational.hpp"

#include "cartanlab/errors.hpp"

#include <cctype>

namespace cartanlab {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// BigInt's string constructor treats a leading zero as an octal prefix.
BigInt decimal(std::string_view digits) {
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return BigInt{std::string(digits)};
}

BigInt pow10(std::size_t e) {
    BigInt r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= 10;
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    auto fail = [&] { return InputError("malformed rational '" + std::string(text) + "'"); };
    if (s.empty()) throw fail();

    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw fail();
        BigInt d = decimal(den);
        if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
        value = Rational(decimal(num), d);
    } else {
        std::string_view mant = s;
        long long exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            mant = s.substr(0, e);
            auto es = s.substr(e + 1);
            bool eneg = false;
            if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
                eneg = es.front() == '-';
                es.remove_prefix(1);
            }
            if (!all_digits(es) || es.size() > 6) throw fail();
            exp10 = std::stoll(std::string(es));
            if (exp10 > 4096) throw fail();
            if (eneg) exp10 = -exp10;
        }
        std::string digits;
        long long frac = 0;
        if (auto dot = mant.find('.'); dot != std::string_view::npos) {
            auto ip = mant.substr(0, dot);
            auto fp = mant.substr(dot + 1);
            if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
                (ip.empty() && fp.empty()))
                throw fail();
            digits = std::string(ip) + std::string(fp);
            frac = static_cast<long long>(fp.size());
        } else {
            if (!all_digits(mant)) throw fail();
            digits = std::string(mant);
        }
        long long shift = exp10 - frac;
        BigInt m = decimal(digits);
        if (shift >= 0)
            value = Rational(m * pow10(static_cast<std::size_t>(shift)));
        else
            value = Rational(m, pow10(static_cast<std::size_t>(-shift)));
    }
    return neg ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
    if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

QVec zero_vec(std::size_t n) { return QVec(n, Rational(0)); }

QVec unit_vec(std::size_t n, std::size_t i) {
    QVec v(n, Rational(0));
    v.at(i) = 1;
    return v;
}

bool is_zero(const QVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

QVec operator+(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector sum: length mismatch");
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

QVec operator-(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector difference: length mismatch");
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

QVec scale(const Rational& s, const QVec& a) {
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

}  // namespace cartanlab
