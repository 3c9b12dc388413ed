#include "lifecycle/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace lifecycle {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& s, const std::string& where) {
    T v{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, v);
    LC_REQUIRE(ec == std::errc() && p == last, where << ": bad number '" << s << "'");
    return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
    if (s == "true")
        return true;
    LC_REQUIRE(s == "false", where << ": expected true or false, got '" << s << "'");
    return false;
}

std::vector<double> parse_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        out.push_back(parse_number<double>(trim(item), where));
    LC_REQUIRE(!out.empty(), where << ": empty list");
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::string format_list(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i)
            out += ",";
        out += format_double(vs[i]);
    }
    return out;
}

struct FieldDef {
    const char* section;
    const char* key;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

FieldDef fd(const char* s, const char* k, double RunConfig::* p) {
    return {s, k,
            [p](RunConfig& c, const std::string& v, const std::string& w) {
                c.*p = parse_number<double>(v, w);
            },
            [p](const RunConfig& c) { return format_double(c.*p); }};
}

FieldDef fi(const char* s, const char* k, int RunConfig::* p) {
    return {s, k,
            [p](RunConfig& c, const std::string& v, const std::string& w) {
                c.*p = parse_number<int>(v, w);
            },
            [p](const RunConfig& c) { return std::to_string(c.*p); }};
}

FieldDef fu(const char* s, const char* k, std::uint64_t RunConfig::* p) {
    return {s, k,
            [p](RunConfig& c, const std::string& v, const std::string& w) {
                c.*p = parse_number<std::uint64_t>(v, w);
            },
            [p](const RunConfig& c) { return std::to_string(c.*p); }};
}

FieldDef fb(const char* s, const char* k, bool RunConfig::* p) {
    return {s, k,
            [p](RunConfig& c, const std::string& v, const std::string& w) {
                c.*p = parse_bool(v, w);
            },
            [p](const RunConfig& c) { return std::string(c.*p ? "true" : "false"); }};
}

FieldDef fl(const char* s, const char* k, std::vector<double> RunConfig::* p) {
    return {s, k,
            [p](RunConfig& c, const std::string& v, const std::string& w) {
                c.*p = parse_list(v, w);
            },
            [p](const RunConfig& c) { return format_list(c.*p); }};
}

const std::vector<FieldDef>& field_table() {
    static const std::vector<FieldDef> table = {
        fd("mortality", "x", &RunConfig::x),
        fd("mortality", "m", &RunConfig::m),
        fd("mortality", "b", &RunConfig::b),
        fd("mortality", "horizon", &RunConfig::horizon),

        fd("dfm", "r", &RunConfig::dfm_r),
        fd("dfm", "rho", &RunConfig::dfm_rho),
        fd("dfm", "f0", &RunConfig::dfm_f0),
        fd("dfm", "pi0", &RunConfig::dfm_pi0),
        fl("dfm", "gammas", &RunConfig::dfm_gammas),
        fd("dfm", "path_step", &RunConfig::dfm_path_step),

        fd("table2", "r", &RunConfig::t2_r),
        fd("table2", "horizon", &RunConfig::t2_horizon),
        fl("table2", "gammas", &RunConfig::t2_gammas),
        fl("table2", "sigmas", &RunConfig::t2_sigmas),

        fl("calibration", "sigmas", &RunConfig::calib_sigmas),
        fi("calibration", "nodes", &RunConfig::calib_nodes),
        fi("calibration", "steps_per_year", &RunConfig::calib_steps_per_year),
        fd("calibration", "floor_ratio", &RunConfig::calib_floor_ratio),
        fd("calibration", "lambda_cap", &RunConfig::calib_lambda_cap),
        fd("calibration", "t0", &RunConfig::calib_t0),
        fi("calibration", "output_stride", &RunConfig::calib_output_stride),

        fi("hjb", "nodes", &RunConfig::hjb_nodes),
        fi("hjb", "steps_per_year", &RunConfig::hjb_steps_per_year),
        fi("hjb", "store_every", &RunConfig::hjb_store_every),
        fi("hjb", "surface_time_stride", &RunConfig::surface_time_stride),
        fi("hjb", "surface_node_stride", &RunConfig::surface_node_stride),

        fi("mc", "paths", &RunConfig::mc_paths),
        fi("mc", "steps_per_year", &RunConfig::mc_steps_per_year),
        fu("mc", "seed", &RunConfig::mc_seed),
        fb("mc", "antithetic", &RunConfig::mc_antithetic),
        fb("mc", "bernoulli_deaths", &RunConfig::mc_bernoulli_deaths),
    };
    return table;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& where) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string here;
        {
            std::ostringstream os;
            os << where << ":" << lineno;
            here = os.str();
        }
        const auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            LC_REQUIRE(line.back() == ']', here << ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            LC_REQUIRE(!section.empty(), here << ": empty section name");
            bool known = false;
            for (const auto& f : field_table())
                known = known || section == f.section;
            LC_REQUIRE(known, here << ": unknown section [" << section << "]");
            continue;
        }
        const auto eq = line.find('=');
        LC_REQUIRE(eq != std::string::npos, here << ": expected key = value");
        LC_REQUIRE(!section.empty(), here << ": key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        LC_REQUIRE(!key.empty(), here << ": empty key");

        const FieldDef* hit = nullptr;
        for (const auto& f : field_table())
            if (section == f.section && key == f.key) {
                hit = &f;
                break;
            }
        LC_REQUIRE(hit, here << ": unknown key '" << key << "' in [" << section << "]");
        const std::string id = section + "." + key;
        LC_REQUIRE(seen.insert(id).second, here << ": duplicate key '" << id << "'");
        hit->set(cfg, val, here);
    }
    cfg.require_valid();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& f : field_table()) {
        if (section != f.section) {
            if (!section.empty())
                out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += std::string(f.key) + " = " + f.get(cfg) + "\n";
    }
    return out;
}

CalibGrid RunConfig::calib_grid() const {
    CalibGrid g;
    g.nodes = calib_nodes;
    g.dt = 1.0 / double(calib_steps_per_year);
    g.floor_ratio = calib_floor_ratio;
    g.lambda_cap = calib_lambda_cap;
    g.t0 = calib_t0;
    return g;
}

HjbGrid RunConfig::hjb_grid() const {
    HjbGrid g;
    g.nodes = hjb_nodes;
    g.dt = 1.0 / double(hjb_steps_per_year);
    g.floor_ratio = calib_floor_ratio;
    g.lambda_cap = calib_lambda_cap;
    g.store_every = hjb_store_every;
    return g;
}

SimConfig RunConfig::sim_config() const {
    SimConfig s;
    s.n_paths = std::size_t(mc_paths);
    s.dt_sim = 1.0 / double(mc_steps_per_year);
    s.seed = mc_seed;
    s.antithetic = mc_antithetic;
    s.bernoulli_deaths = mc_bernoulli_deaths;
    return s;
}

void RunConfig::require_valid() const {
    gompertz().require_valid();
    LC_REQUIRE(horizon > 0.0, "mortality horizon must be positive");
    LC_REQUIRE(dfm_f0 > 0.0, "dfm: f0 must be positive");
    LC_REQUIRE(dfm_pi0 >= 0.0, "dfm: pi0 must be nonnegative");
    LC_REQUIRE(dfm_path_step > 0.0, "dfm: path_step must be positive");
    for (double g : dfm_gammas)
        LC_REQUIRE(g > 0.0, "dfm: gamma must be positive");
    LC_REQUIRE(t2_horizon > 0.0 && t2_horizon <= horizon,
               "table2: horizon must lie in (0, mortality horizon]");
    for (double g : t2_gammas)
        LC_REQUIRE(g > 0.0, "table2: gamma must be positive");
    for (double s : t2_sigmas)
        LC_REQUIRE(s >= 0.0, "table2: sigma must be nonnegative");
    for (double s : calib_sigmas)
        LC_REQUIRE(s >= 0.0, "calibration: sigma must be nonnegative");
    calib_grid().require_valid();
    LC_REQUIRE(calib_output_stride >= 1, "calibration: output_stride must be >= 1");
    hjb_grid().require_valid();
    LC_REQUIRE(surface_time_stride >= 1 && surface_node_stride >= 1,
               "hjb: surface strides must be >= 1");
    LC_REQUIRE(mc_paths >= 2, "mc: need at least two paths");
    LC_REQUIRE(mc_steps_per_year >= 1, "mc: steps_per_year must be >= 1");
    sim_config().require_valid();
}

}  // namespace lifecycle
