#include "lifecycle/survival_curve.hpp"

#include <fstream>
#include <sstream>

#include "lifecycle/assert.hpp"

namespace lifecycle {

double SurvivalCurve::log_hazard_slope(double t) const {
    const double pv = p(t);
    const double pt = p_t(t);
    LC_REQUIRE(pv > 0.0 && pt < 0.0, "survival curve degenerate at t=" << t);
    // d/dt ln(-p_t/p) = p_tt/p_t - p_t/p
    return p_tt(t) / pt - pt / pv;
}

GompertzSurvival::GompertzSurvival(const GompertzParams& g, double horizon)
    : g_(g), horizon_(horizon) {
    g_.require_valid();
    LC_REQUIRE(horizon > 0.0, "survival curve horizon must be positive");
}

TabulatedSurvival::TabulatedSurvival(std::vector<double> ts, std::vector<double> ps) {
    LC_REQUIRE(ts.size() >= 4, "tabulated survival: need at least 4 points");
    LC_REQUIRE(ts.front() == 0.0 && ps.front() == 1.0,
               "tabulated survival must start at (0, 1)");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        LC_REQUIRE(ps[i] > 0.0 && ps[i] <= 1.0, "tabulated survival out of (0,1] at row " << i);
        if (i > 0)
            LC_REQUIRE(ps[i] <= ps[i - 1], "tabulated survival must be non-increasing");
    }
    spline_ = MonotoneCubic(std::move(ts), std::move(ps));
}

std::unique_ptr<SurvivalCurve> load_survival_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open survival curve file: " + path);
    std::string line;
    LC_REQUIRE(std::getline(in, line), "survival curve file is empty: " << path);
    // tolerate a UTF-8 BOM and trailing whitespace on the header
    if (line.rfind("\xEF\xBB\xBF", 0) == 0)
        line = line.substr(3);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.pop_back();
    LC_REQUIRE(line == "t,p", "survival curve file must start with header 't,p', got '"
                                  << line << "'");
    std::vector<double> ts, ps;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        double t, p;
        char comma;
        LC_REQUIRE(ss >> t >> comma >> p && comma == ',',
                   "survival curve file: bad row " << row << ": '" << line << "'");
        ts.push_back(t);
        ps.push_back(p);
    }
    return std::make_unique<TabulatedSurvival>(std::move(ts), std::move(ps));
}

}  // namespace lifecycle
