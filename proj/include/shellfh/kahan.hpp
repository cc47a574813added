#pragma once

namespace shellfh {

/// Compensated (Kahan) accumulator used for all quadrature node sums.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

} // namespace shellfh
