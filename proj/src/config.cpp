#include "config.h"

#include <cerrno>
#include <climits>
#include <cstdlib>

#include "errors.h"
#include "textio.h"

namespace memcell {

static double parse_double(const std::string &key,
                           const std::string &value) {
    const char *s = value.c_str();
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || errno == ERANGE)
        throw ConfigError(key + ": cannot parse '" + value +
                          "' as a number");
    return v;
}

static int parse_int(const std::string &key, const std::string &value) {
    const char *s = value.c_str();
    char *end = nullptr;
    errno = 0;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || errno == ERANGE || v < INT_MIN ||
        v > INT_MAX)
        throw ConfigError(key + ": cannot parse '" + value +
                          "' as an integer");
    return static_cast<int>(v);
}

void set_key(CellConfig &cfg, const std::string &key0,
             const std::string &value0) {
    const std::string key = trim(key0), value = trim(value0);
    if (key.empty())
        throw ConfigError("missing key before '='");
    if (value.empty())
        throw ConfigError(key + ": empty value");

    if (key == "n")
        cfg.n = parse_int(key, value);
    else if (key == "m")
        cfg.m = parse_int(key, value);
    else if (key == "v_max")
        cfg.v_max = parse_double(key, value);
    else if (key == "v_read")
        cfg.v_read = parse_double(key, value);
    else if (key == "t_reset")
        cfg.t_reset = parse_double(key, value);
    else if (key == "t_write")
        cfg.t_write = parse_double(key, value);
    else if (key == "t_read")
        cfg.t_read = parse_double(key, value);
    else if (key == "dt")
        cfg.dt = parse_double(key, value);
    else if (key == "r_sub") {
        std::vector<double> rs;
        for (const std::string &tok : split(value, ','))
            rs.push_back(parse_double(key, trim(tok)));
        cfg.r_sub = rs;
    } else if (key == "r_load")
        cfg.r_load = parse_double(key, value);
    else if (key == "topology")
        cfg.topology = value;
    else if (key == "r_on")
        cfg.device.r_on = parse_double(key, value);
    else if (key == "r_off")
        cfg.device.r_off = parse_double(key, value);
    else if (key == "v_threshold")
        cfg.device.v_threshold = parse_double(key, value);
    else if (key == "mobility_factor") {
        if (value == "auto") {
            cfg.mobility_auto = true;
        } else {
            cfg.device.mobility = parse_double(key, value);
            cfg.mobility_auto = false;
        }
    } else if (key == "window_exponent")
        cfg.device.window_exponent = parse_int(key, value);
    else if (key == "polarity")
        cfg.device.polarity = parse_int(key, value);
    else if (key == "m_initial")
        cfg.m_initial = parse_double(key, value);
    else if (key == "epsilon_closed_form")
        cfg.epsilon_closed_form = parse_double(key, value);
    else if (key == "epsilon_transient")
        cfg.epsilon_transient = parse_double(key, value);
    else
        throw ConfigError("unknown key '" + key + "'");
}

CellConfig parse_config(const std::string &text) {
    CellConfig cfg;
    int lineno = 0;
    for (const std::string &raw : split(text, '\n')) {
        ++lineno;
        std::string line = raw;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value, got '" + line + "'");
        try {
            set_key(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError &e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " +
                              e.what());
        }
    }
    validate(cfg);
    return cfg;
}

std::string render_config(const CellConfig &cfg0) {
    const CellConfig cfg = resolve(cfg0);
    std::string s;
    auto kv = [&s](const std::string &k, const std::string &v) {
        s += k + " = " + v + "\n";
    };
    kv("n", std::to_string(cfg.n));
    kv("m", std::to_string(cfg.m));
    kv("topology", cfg.topology);
    std::string rs;
    for (size_t i = 0; i < cfg.r_sub.size(); ++i)
        rs += (i ? ", " : "") + fmt_full(cfg.r_sub[i]);
    kv("r_sub", rs);
    kv("r_load", fmt_full(cfg.r_load));
    kv("v_max", fmt_full(cfg.v_max));
    kv("v_read", fmt_full(cfg.v_read));
    kv("t_reset", fmt_full(cfg.t_reset));
    kv("t_write", fmt_full(cfg.t_write));
    kv("t_read", fmt_full(cfg.t_read));
    kv("dt", fmt_full(cfg.dt));
    kv("r_on", fmt_full(cfg.device.r_on));
    kv("r_off", fmt_full(cfg.device.r_off));
    kv("v_threshold", fmt_full(cfg.device.v_threshold));
    kv("mobility_factor", fmt_full(cfg.device.mobility));
    kv("window_exponent", std::to_string(cfg.device.window_exponent));
    kv("polarity", std::to_string(cfg.device.polarity));
    kv("m_initial", fmt_full(cfg.m_initial));
    kv("epsilon_closed_form", fmt_full(cfg.epsilon_closed_form));
    kv("epsilon_transient", fmt_full(cfg.epsilon_transient));
    return s;
}

} // namespace memcell
