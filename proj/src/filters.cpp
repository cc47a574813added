#include "shellfh/filters.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace shellfh {

double exp_filter(double x) {
    if (!(x >= 0.0)) throw std::domain_error("exp_filter: x must be >= 0");
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    // x -> 1+: the inner exp underflows to 0 and the result is exactly 1;
    // x -> 2-: the argument diverges to -inf and the result is exactly 0.
    return std::exp(-2.0 * std::exp(2.0 / (1.0 - x)) / (2.0 - x));
}

double indicator_filter(double x) {
    if (!(x >= 0.0)) throw std::domain_error("indicator_filter: x must be >= 0");
    return x <= 1.0 ? 1.0 : 0.0;
}

FilterPair::FilterPair(std::function<double(double)> h_rad, double a,
                       std::string rad_name, std::function<double(double)> h_ang,
                       double b, std::string ang_name)
    : h_rad_(std::move(h_rad)),
      h_ang_(std::move(h_ang)),
      a_(a),
      b_(b),
      rad_name_(std::move(rad_name)),
      ang_name_(std::move(ang_name)) {
    if (!(a_ > 1.0) || !(a_ <= 2.0) || !(b_ > 1.0) || !(b_ <= 2.0))
        throw std::invalid_argument("FilterPair: caps must lie in (1, 2]");
    if (!h_rad_ || !h_ang_)
        throw std::invalid_argument("FilterPair: null filter function");
}

namespace {

std::function<double(double)> filter_by_name(const std::string& name, double cap) {
    if (name == "exp") {
        if (cap != 2.0)
            throw std::invalid_argument(
                "FilterPair: the exp filter has support [0,2]; its cap must be 2");
        return exp_filter;
    }
    if (name == "indicator") return indicator_filter;
    throw std::invalid_argument("FilterPair: unknown filter '" + name +
                                "' (expected \"exp\" or \"indicator\")");
}

} // namespace

FilterPair FilterPair::make(const std::string& rad_name, double a,
                            const std::string& ang_name, double b) {
    return FilterPair(filter_by_name(rad_name, a), a, rad_name,
                      filter_by_name(ang_name, b), b, ang_name);
}

} // namespace shellfh
