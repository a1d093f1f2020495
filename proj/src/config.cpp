#include "phasespace/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace phasespace {
namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

struct Ini {
    // section -> key -> entry; section header lines kept for diagnostics
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::map<std::string, int> section_lines;

    static Ini parse(const std::string& text) {
        Ini ini;
        std::istringstream in(text);
        std::string raw;
        std::string current;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            std::string s = trim(raw);
            if (s.empty() || s[0] == '#' || s[0] == ';') continue;
            if (s.front() == '[') {
                if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
                current = lower(trim(s.substr(1, s.size() - 2)));
                if (current.empty()) fail(line, "empty section name");
                if (!ini.sections.count(current)) {
                    ini.sections[current] = {};
                    ini.section_lines[current] = line;
                }
                continue;
            }
            size_t eq = s.find('=');
            if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
            if (current.empty()) fail(line, "key outside any [section]");
            std::string key = lower(trim(s.substr(0, eq)));
            std::string value = trim(s.substr(eq + 1));
            if (key.empty()) fail(line, "empty key");
            if (value.empty()) fail(line, "empty value for key '" + key + "'");
            auto& sec = ini.sections[current];
            auto it = sec.find(key);
            if (it != sec.end())
                fail(line, "duplicate key '" + key + "' (first at line " +
                               std::to_string(it->second.line) + ")");
            sec[key] = Entry{value, line, false};
        }
        return ini;
    }

    const Entry* find(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    void check_consumed(const std::set<std::string>& known) const {
        for (const auto& [name, sec] : sections) {
            if (!known.count(name))
                fail(section_lines.at(name), "unknown section [" + name + "]");
            for (const auto& [key, e] : sec)
                if (!e.used) fail(e.line, "unknown key '" + key + "' in section [" + name + "]");
        }
    }
};

double to_double(const std::string& v, int line) {
    const char* b = v.data();
    const char* e = b + v.size();
    double out = 0.0;
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e) fail(line, "expected a number, got '" + v + "'");
    return out;
}

long to_long(const std::string& v, int line) {
    const char* b = v.data();
    const char* e = b + v.size();
    long out = 0;
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e) fail(line, "expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& v, int line) {
    std::string s = lower(v);
    if (s == "on" || s == "true" || s == "yes" || s == "1") return true;
    if (s == "off" || s == "false" || s == "no" || s == "0") return false;
    fail(line, "expected on/off, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string tok;
    for (char c : v) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!tok.empty()) out.push_back(tok);
            tok.clear();
        } else {
            tok.push_back(c);
        }
    }
    if (!tok.empty()) out.push_back(tok);
    return out;
}

struct Reader {
    const Ini& ini;

    double num(const std::string& sec, const std::string& key, double def) const {
        const Entry* e = ini.find(sec, key);
        return e ? to_double(e->value, e->line) : def;
    }
    long integer(const std::string& sec, const std::string& key, long def) const {
        const Entry* e = ini.find(sec, key);
        return e ? to_long(e->value, e->line) : def;
    }
    bool flag(const std::string& sec, const std::string& key, bool def) const {
        const Entry* e = ini.find(sec, key);
        return e ? to_bool(e->value, e->line) : def;
    }
    std::string text(const std::string& sec, const std::string& key,
                     const std::string& def) const {
        const Entry* e = ini.find(sec, key);
        return e ? e->value : def;
    }
    /// Per-mode list, broadcast from a single value.
    std::vector<double> per_mode(const std::string& sec, const std::string& key, int m) const {
        const Entry* e = ini.find(sec, key);
        if (!e) return std::vector<double>(m, 0.0);
        std::vector<std::string> toks = split_list(e->value);
        std::vector<double> out;
        for (const auto& t : toks) out.push_back(to_double(t, e->line));
        if (static_cast<int>(out.size()) == 1) out.assign(m, out[0]);
        if (static_cast<int>(out.size()) != m)
            fail(e->line, "'" + key + "' needs 1 or " + std::to_string(m) + " values, got " +
                              std::to_string(out.size()));
        return out;
    }
};

std::vector<HopEdge> parse_hops(const Entry& e, int m) {
    std::vector<HopEdge> out;
    for (const std::string& tok : split_list(e.value)) {
        size_t dash = tok.find('-', 1);  // allow negative? indices are nonnegative
        size_t colon = tok.find(':');
        if (dash == std::string::npos || colon == std::string::npos || colon < dash)
            fail(e.line, "hop '" + tok + "' must look like A-B:J");
        HopEdge h;
        h.a = static_cast<int>(to_long(tok.substr(0, dash), e.line));
        h.b = static_cast<int>(to_long(tok.substr(dash + 1, colon - dash - 1), e.line));
        h.coupling = to_double(tok.substr(colon + 1), e.line);
        if (h.a < 0 || h.a >= m || h.b < 0 || h.b >= m)
            fail(e.line, "hop '" + tok + "' references a mode outside 0.." + std::to_string(m - 1));
        out.push_back(h);
    }
    return out;
}

}  // namespace

cplx parse_complex(const std::string& token) {
    std::string s = trim(token);
    if (s.empty()) throw ConfigError("empty complex literal");
    if (s.back() != 'i' && s.back() != 'I') {
        const char* b = s.data();
        const char* e = b + s.size();
        double re = 0.0;
        auto [p, ec] = std::from_chars(b, e, re);
        if (ec != std::errc() || p != e)
            throw ConfigError("bad complex literal '" + token + "'");
        return cplx(re, 0.0);
    }
    std::string body = s.substr(0, s.size() - 1);
    // find the sign splitting real and imaginary parts (not an exponent sign)
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto parse_part = [&](std::string part, double empty_value) {
        if (part.empty() || part == "+") return empty_value;
        if (part == "-") return -empty_value;
        if (part[0] == '+') part.erase(0, 1);  // from_chars rejects a leading plus
        const char* b = part.data();
        const char* e = b + part.size();
        double v = 0.0;
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e)
            throw ConfigError("bad complex literal '" + token + "'");
        return v;
    };
    if (split == std::string::npos) return cplx(0.0, parse_part(body, 1.0));
    return cplx(parse_part(body.substr(0, split), 0.0), parse_part(body.substr(split), 1.0));
}

std::vector<cplx> RunConfig::alpha_per_mode() const {
    std::vector<cplx> a = ansatz.alpha;
    if (a.empty()) a.assign(model.n_modes, cplx(0.0, 0.0));
    if (static_cast<int>(a.size()) == 1 && model.n_modes > 1) a.assign(model.n_modes, a[0]);
    if (static_cast<int>(a.size()) != model.n_modes)
        throw ConfigError("alpha needs 1 or " + std::to_string(model.n_modes) + " entries");
    return a;
}

RunConfig parse_config(const std::string& text) {
    Ini ini = Ini::parse(text);
    Reader rd{ini};
    RunConfig rc;
    rc.source_text = text;

    const int m = static_cast<int>(rd.integer("model", "modes", 1));
    if (m < 1) throw ConfigError("model needs at least one mode");
    rc.model.n_modes = m;
    rc.model.detuning = rd.per_mode("model", "detuning", m);
    rc.model.kerr = rd.per_mode("model", "kerr", m);
    rc.model.drive1 = rd.per_mode("model", "drive", m);
    rc.model.drive2 = rd.per_mode("model", "drive2", m);
    rc.model.loss1 = rd.per_mode("model", "loss", m);
    rc.model.gain = rd.per_mode("model", "gain", m);
    rc.model.loss2 = rd.per_mode("model", "loss2", m);
    if (const Entry* e = ini.find("model", "hops")) rc.model.hops = parse_hops(*e, m);
    if (const Entry* e = ini.find("model", "ring")) {
        double j = to_double(e->value, e->line);
        if (m < 2) fail(e->line, "'ring' needs at least two modes");
        for (int k = 0; k < m - 1; ++k) rc.model.hops.push_back({k, k + 1, j});
        if (m > 2) rc.model.hops.push_back({m - 1, 0, j});
    }

    if (const Entry* e = ini.find("run", "qpd")) {
        try {
            rc.qpd = qpd_from_name(e->value);
        } catch (const ConfigError& err) {
            fail(e->line, err.what());
        }
    } else {
        throw ConfigError("config: missing required key 'qpd' in section [run]");
    }
    rc.tvmc.dt = rd.num("run", "dt", rc.tvmc.dt);
    rc.tvmc.total_time = rd.num("run", "time", rc.tvmc.total_time);
    rc.tvmc.output_stride = static_cast<int>(rd.integer("run", "output_stride", rc.tvmc.output_stride));
    rc.tvmc.svd_cutoff = rd.num("run", "svd_cutoff", rc.tvmc.svd_cutoff);
    rc.tvmc.diag_shift = rd.num("run", "diag_shift", rc.tvmc.diag_shift);
    rc.tvmc.centering = rd.flag("run", "centering", rc.tvmc.centering);
    rc.tvmc.trust_threshold = rd.num("run", "trust_threshold", rc.tvmc.trust_threshold);
    rc.tvmc.min_acceptance = rd.num("run", "min_acceptance", rc.tvmc.min_acceptance);
    rc.tvmc.track_wehrl = rd.flag("run", "track_wehrl", rc.tvmc.track_wehrl);
    rc.tvmc.track_negativity = rd.flag("run", "track_negativity", rc.tvmc.track_negativity);
    rc.sampler.seed = static_cast<uint64_t>(rd.integer("run", "seed", 1));

    rc.sampler.n_chains = static_cast<int>(rd.integer("sampler", "chains", rc.sampler.n_chains));
    rc.sampler.samples_per_chain =
        static_cast<int>(rd.integer("sampler", "samples_per_chain", rc.sampler.samples_per_chain));
    rc.sampler.burn_in = static_cast<int>(rd.integer("sampler", "burn_in", rc.sampler.burn_in));
    rc.sampler.refresh_sweeps =
        static_cast<int>(rd.integer("sampler", "refresh", rc.sampler.refresh_sweeps));
    rc.sampler.proposal_sigma = rd.num("sampler", "proposal_sigma", rc.sampler.proposal_sigma);
    rc.sampler.init_spread = rd.num("sampler", "init_spread", rc.sampler.init_spread);
    rc.tvmc.obs_samples_per_chain = static_cast<int>(
        rd.integer("sampler", "obs_samples_per_chain", rc.tvmc.obs_samples_per_chain));
    rc.tvmc.obs_proposal_sigma =
        rd.num("sampler", "obs_proposal_sigma", rc.tvmc.obs_proposal_sigma);
    rc.tvmc.obs_refresh_sweeps =
        static_cast<int>(rd.integer("sampler", "obs_refresh", rc.tvmc.obs_refresh_sweeps));

    rc.ansatz.kind = lower(rd.text("ansatz", "kind", rc.ansatz.kind));
    if (rc.ansatz.kind != "gaussian-mixture" && rc.ansatz.kind != "rbm") {
        const Entry* e = ini.find("ansatz", "kind");
        throw ConfigError("config line " + std::to_string(e ? e->line : 0) +
                          ": ansatz kind must be gaussian-mixture or rbm");
    }
    rc.ansatz.components =
        static_cast<int>(rd.integer("ansatz", "components", rc.ansatz.components));
    rc.ansatz.hidden_per_unit =
        static_cast<int>(rd.integer("ansatz", "hidden_per_unit", rc.ansatz.hidden_per_unit));
    rc.ansatz.init = lower(rd.text("ansatz", "init", rc.ansatz.init));
    if (rc.ansatz.init != "coherent" && rc.ansatz.init != "cat" && rc.ansatz.init != "from-file" &&
        rc.ansatz.init != "fit-from-grid")
        throw ConfigError("ansatz init must be coherent, cat, from-file, or fit-from-grid");
    if (const Entry* e = ini.find("ansatz", "alpha")) {
        for (const std::string& tok : split_list(e->value)) {
            try {
                rc.ansatz.alpha.push_back(parse_complex(tok));
            } catch (const ConfigError& err) {
                fail(e->line, err.what());
            }
        }
    }
    if (const Entry* e = ini.find("ansatz", "parity")) {
        std::string p = lower(e->value);
        if (p == "even" || p == "+1")
            rc.ansatz.cat_parity = 1;
        else if (p == "odd" || p == "-1")
            rc.ansatz.cat_parity = -1;
        else
            fail(e->line, "parity must be even or odd");
    }
    rc.ansatz.jitter = rd.num("ansatz", "jitter", rc.ansatz.jitter);
    rc.ansatz.file = rd.text("ansatz", "file", rc.ansatz.file);
    rc.ansatz.fit_iterations =
        static_cast<int>(rd.integer("ansatz", "fit_iterations", rc.ansatz.fit_iterations));
    rc.ansatz.fit_learning_rate = rd.num("ansatz", "fit_learning_rate", rc.ansatz.fit_learning_rate);

    if (const Entry* e = ini.find("oracle", "cutoff")) {
        rc.oracle.cutoff.clear();
        for (const std::string& tok : split_list(e->value))
            rc.oracle.cutoff.push_back(static_cast<int>(to_long(tok, e->line)));
    }
    rc.oracle.dt = rd.num("oracle", "dt", rc.oracle.dt);

    rc.outputs.directory = rd.text("output", "directory", rc.outputs.directory);
    rc.outputs.grid_snapshots = rd.flag("output", "grid_snapshots", rc.outputs.grid_snapshots);
    rc.outputs.grid_half_width = rd.num("output", "grid_half_width", rc.outputs.grid_half_width);
    rc.outputs.grid_points =
        static_cast<int>(rd.integer("output", "grid_points", rc.outputs.grid_points));
    rc.outputs.plots = rd.flag("output", "plots", rc.outputs.plots);

    ini.check_consumed({"model", "run", "sampler", "ansatz", "oracle", "output"});
    rc.model.validate();
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace phasespace
