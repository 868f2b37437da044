#pragma once

#include "univhol/arith.hpp"

#include <mpfr.h>

namespace uh::detail {

// RAII MPFR value at a fixed precision.
class Mp {
public:
    explicit Mp(long prec = kBoundPrecision) { mpfr_init2(v_, prec); }
    ~Mp() { mpfr_clear(v_); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Rat to_rat() const {
        Rat q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

private:
    mpfr_t v_;
};

}  // namespace uh::detail
