// ============================================================================
// bessel.hpp
//
// Bessel functions of the first kind J_nu (integer order), wrapping GSL's
// gsl_sf_bessel_Jn, which runs Steed's continued-fraction / recurrence
// machinery and is good to ~1e-13 relative accuracy across the ranges used
// here.  Orders are capped at 200: the toolkit's transforms never need more,
// and beyond that the downward recurrences would deserve a fresh accuracy
// audit.
//
// The GSL default error handler aborts the process; we install the no-op
// handler once and translate error codes into exceptions / underflow zeros
// ourselves.
// ============================================================================
#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <stdexcept>
#include <string>

namespace twistsum {

struct OrderTooLarge : std::domain_error {
    explicit OrderTooLarge(const std::string& m) : std::domain_error(m) {}
};

namespace detail {
inline bool gsl_handler_disabled = [] {
    gsl_set_error_handler_off();
    return true;
}();
}  // namespace detail

inline double bessel_J(int nu, double x) {
    (void)detail::gsl_handler_disabled;
    if (nu < 0 || nu > 200)
        throw OrderTooLarge("bessel_J: order " + std::to_string(nu) +
                            " outside supported range [0,200]");
    gsl_sf_result res;
    int status = gsl_sf_bessel_Jn_e(nu, x, &res);
    if (status == GSL_EUNDRFLW) return 0.0;
    if (status != GSL_SUCCESS)
        throw std::runtime_error("bessel_J: gsl error " + std::string(gsl_strerror(status)) +
                                 " at nu=" + std::to_string(nu) + " x=" + std::to_string(x));
    return res.val;
}

}  // namespace twistsum
