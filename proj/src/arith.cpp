#include "univhol/arith.hpp"

#include "mpfr_util.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace uh {

namespace {

using detail::Mp;

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bool perfect_square(const Int& z, Int& root) {
    if (sgn(z) < 0 || !mpz_perfect_square_p(z.get_mpz_t())) return false;
    mpz_sqrt(root.get_mpz_t(), z.get_mpz_t());
    return true;
}

}  // namespace

CRat operator/(const CRat& a, const CRat& b) {
    Rat d = b.norm2();
    if (sgn(d) == 0) throw std::domain_error("complex division by zero");
    CRat n = a * b.conj();
    return {n.re / d, n.im / d};
}

CRat pow(const CRat& z, unsigned e) {
    CRat result(1), base = z;
    while (e) {
        if (e & 1u) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

Rat parse_rat(std::string_view s) {
    std::string_view body = s;
    bool neg = false;
    if (!body.empty() && body.front() == '-') {
        neg = true;
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("malformed rational '" + std::string(s) + "' (expected p or p/q)");
    Int n{std::string(num)}, d{std::string(den)};
    if (sgn(d) == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    Rat q(neg ? Int(-n) : n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const CRat& z) {
    if (sgn(z.im) == 0) return to_string(z.re);
    std::string im = to_string(abs(z.im));
    return to_string(z.re) + (sgn(z.im) < 0 ? "-" : "+") + im + "i";
}

Rat ratio(const Int& p, const Int& q) {
    if (q == 0) throw std::domain_error("zero denominator");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

Int factorial(unsigned long k) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), k);
    return r;
}

Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rat rat_pow(const Rat& x, unsigned long e) {
    Int n, d;
    mpz_pow_ui(n.get_mpz_t(), x.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), x.get_den_mpz_t(), e);
    Rat r(n, d);
    r.canonicalize();
    return r;
}

Int ceil_rat(const Rat& x) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Int floor_rat(const Rat& x) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Rat abs(const Rat& x) { return sgn(x) < 0 ? Rat(-x) : x; }

Rat ceil_decimal(const Rat& x, unsigned digits) {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Rat r(ceil_rat(x * scale), scale);
    r.canonicalize();
    return r;
}

Bounds sqrt_bounds(const Rat& x) {
    if (sgn(x) < 0) throw std::domain_error("sqrt of negative rational");
    Int rn, rd;
    if (perfect_square(x.get_num(), rn) && perfect_square(x.get_den(), rd)) {
        Rat r(rn, rd);
        return {r, r};
    }
    Mp lo, hi;
    mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_sqrt(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_sqrt(hi.get(), hi.get(), MPFR_RNDU);
    return {lo.to_rat(), hi.to_rat()};
}

Bounds modulus_bounds(const CRat& z) {
    if (sgn(z.im) == 0) return {abs(z.re), abs(z.re)};
    if (sgn(z.re) == 0) return {abs(z.im), abs(z.im)};
    return sqrt_bounds(z.norm2());
}

Bounds exp_bounds(const Rat& x) {
    if (sgn(x) == 0) return {Rat(1), Rat(1)};
    Mp lo, hi;
    mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
    return {lo.to_rat(), hi.to_rat()};
}

Bounds exp_bounds(const Bounds& x) { return {exp_bounds(x.lo).lo, exp_bounds(x.hi).hi}; }

Bounds log_bounds(const Rat& x) {
    if (sgn(x) <= 0) throw std::domain_error("log of non-positive rational");
    if (x == 1) return {Rat(0), Rat(0)};
    Mp lo, hi;
    mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
    return {lo.to_rat(), hi.to_rat()};
}

Bounds log_bounds(const Bounds& x) { return {log_bounds(x.lo).lo, log_bounds(x.hi).hi}; }

Bounds pow_bounds(const Rat& x, const Rat& beta) {
    if (sgn(beta) <= 0) throw std::domain_error("pow_bounds needs a positive exponent");
    if (sgn(x) < 0) throw std::domain_error("pow_bounds needs a non-negative base");
    if (sgn(x) == 0) return {Rat(0), Rat(0)};
    if (beta.get_den() == 1 && beta.get_num().fits_ulong_p()) {
        Rat r = rat_pow(x, beta.get_num().get_ui());
        return {r, r};
    }
    Mp lo, hi;
    mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_mul_q(lo.get(), lo.get(), beta.get_mpq_t(), MPFR_RNDD);
    mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
    mpfr_mul_q(hi.get(), hi.get(), beta.get_mpq_t(), MPFR_RNDU);
    mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
    return {lo.to_rat(), hi.to_rat()};
}

double to_double(const Rat& q) {
    Mp t;
    mpfr_set_q(t.get(), q.get_mpq_t(), MPFR_RNDN);
    return mpfr_get_d(t.get(), MPFR_RNDN);
}

Rat from_double(double d) {
    if (!std::isfinite(d)) throw std::domain_error("non-finite double");
    Rat r(d);
    return r;
}

}  // namespace uh
