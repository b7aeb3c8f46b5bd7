#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wfrac/expr.hpp"

namespace wfrac {

struct DomainInterval {
    double a = 0.0;
    double b = 1.0;
    bool open_a = false;
    bool open_b = false;

    DomainInterval() = default;
    DomainInterval(double lo, double hi, bool oa = false, bool ob = false);
    bool unbounded() const { return b == std::numeric_limits<double>::infinity(); }
};

struct InversionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// phi^{-1} on an interval; caches phi' so repeated solves are cheap
class MonotoneInverse {
public:
    MonotoneInverse(Expr phi, DomainInterval interval);
    double operator()(double y) const;
    double phi_a() const { return phi_a_; }
    const Expr& phi() const { return phi_; }

private:
    Expr phi_;
    Expr dphi_;
    DomainInterval iv_;
    double phi_a_;
    double phi_b_;  // +inf for unbounded intervals
};

double invert_monotone(const Expr& phi, double y, const DomainInterval& interval);

struct ValidationReport {
    bool weight_ok = false;
    double weight_min_abs = 0.0;
    bool phi_monotone_ok = false;
    double phi_prime_min = 0.0;
    int samples_used = 0;
    std::vector<std::string> messages;

    bool ok() const { return weight_ok && phi_monotone_ok; }
};

ValidationReport validate_spec(const Expr& w, const Expr& phi, const DomainInterval& interval,
                               int n_samples = 257);

}  // namespace wfrac
