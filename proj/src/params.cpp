#include "mips/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mips {

std::string format_violations(const std::vector<Violation>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) os << "; ";
        os << v[i].field << ": " << v[i].code << " (" << v[i].message << ")";
    }
    return os.str();
}

namespace {

void require_positive(std::vector<Violation>& out, const char* field, double value) {
    if (!(value > 0.0)) {
        out.push_back({field, "NonPositive", "must be > 0"});
    }
}

void require_nonnegative(std::vector<Violation>& out, const char* field, double value) {
    if (!(value >= 0.0)) {
        out.push_back({field, "NonPositive", "must be >= 0"});
    }
}

}  // namespace

std::vector<Violation> validate_params(const SwarmParams& p) {
    std::vector<Violation> out;

    if (p.n_robots < 1) out.push_back({"n_robots", "NonPositive", "must be >= 1"});
    require_positive(out, "radius", p.radius);
    require_nonnegative(out, "speed", p.speed);
    require_nonnegative(out, "diff_trans", p.diff_trans);
    // diff_rot appears in denominators (effective diffusion, free energy).
    require_positive(out, "diff_rot", p.diff_rot);
    require_positive(out, "domain_width", p.domain_width);
    require_positive(out, "domain_height", p.domain_height);
    require_positive(out, "dt", p.dt);
    require_nonnegative(out, "force_stiffness", p.force_stiffness);
    if (p.n_steps < 0) out.push_back({"n_steps", "NonPositive", "must be >= 0"});

    if (p.radius > 0.0) {
        if (p.domain_width <= 2.0 * p.radius) {
            out.push_back({"domain_width", "DegenerateDomain", "side must exceed one robot diameter"});
        }
        if (p.domain_height <= 2.0 * p.radius) {
            out.push_back({"domain_height", "DegenerateDomain", "side must exceed one robot diameter"});
        }
        const double disk_area = static_cast<double>(p.n_robots) * std::numbers::pi * p.radius * p.radius;
        if (p.n_robots >= 1 && p.domain_width > 0.0 && p.domain_height > 0.0 && disk_area >= p.area()) {
            out.push_back({"n_robots", "OverPacked", "total disk area N*pi*r^2 must be < domain area"});
        }
    }
    return out;
}

SwarmParams validated(const SwarmParams& p) {
    auto violations = validate_params(p);
    if (!violations.empty()) {
        const std::string message = "invalid parameters: " + format_violations(violations);
        throw ConfigError(message, std::move(violations));
    }
    return p;
}

}  // namespace mips
