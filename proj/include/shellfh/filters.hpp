#pragma once

#include <functional>
#include <string>

namespace shellfh {

/// C-infinity filter: 1 on [0,1], exp(-2 exp(2/(1-x)) / (2-x)) on (1,2),
/// 0 on [2, inf). The plateau and the support are bit-exact; the interior
/// evaluates without overflow at both joins.
double exp_filter(double x);

/// Sharp-truncation filter: 1 on [0,1], 0 beyond. Realises the
/// non-filtered angular hyperinterpolation as a degenerate filter.
double indicator_filter(double x);

/// A radial and an angular filter with their declared support caps
/// a, b in (1,2]. The caps are what bounds every operator sum; support is
/// never probed numerically.
class FilterPair {
public:
    /// Build from filter names ("exp" or "indicator"). The exp filter has
    /// support [0,2], so it demands a cap of exactly 2.
    static FilterPair make(const std::string& rad_name, double a,
                           const std::string& ang_name, double b);

    /// Extension point for custom filters; the caller asserts that fn is 1
    /// on [0,1] and 0 at and beyond the cap.
    FilterPair(std::function<double(double)> h_rad, double a, std::string rad_name,
               std::function<double(double)> h_ang, double b, std::string ang_name);

    double h_rad(double s) const { return h_rad_(s); }
    double h_ang(double t) const { return h_ang_(t); }
    /// The product filter h(s,t) = h_rad(s) * h_ang(t).
    double product(double s, double t) const { return h_rad_(s) * h_ang_(t); }

    double a() const { return a_; }
    double b() const { return b_; }
    const std::string& rad_name() const { return rad_name_; }
    const std::string& ang_name() const { return ang_name_; }

private:
    std::function<double(double)> h_rad_;
    std::function<double(double)> h_ang_;
    double a_;
    double b_;
    std::string rad_name_;
    std::string ang_name_;
};

} // namespace shellfh
