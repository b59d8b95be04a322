#include "logsch/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "logsch/numfmt.hpp"

namespace logsch {

namespace {

const std::set<std::string> kKeys = {
    "dim", "half_width", "points", "potential", "p", "lambda_start", "lambda_ratio",
    "lambda_min", "tol_grad", "max_outer", "k_solutions", "rng_seed", "output_dir", "emit",
};
const std::set<std::string> kRequired = {"dim", "half_width", "points", "potential"};
const std::set<std::string> kEmit = {"fields", "diagnostics", "plotdata", "checks"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

double real_of(const std::string& key, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const std::invalid_argument&) {
        fail(key, "expected a real number, got '" + value + "'");
    }
}

std::int64_t int_of(const std::string& key, const std::string& value) {
    try {
        return parse_int(value);
    } catch (const std::invalid_argument&) {
        fail(key, "expected an integer, got '" + value + "'");
    }
}

}  // namespace

MountainPassConfig RunSpec::solver_config() const {
    MountainPassConfig cfg;
    cfg.descent_tol = tol_grad;
    cfg.max_outer = max_outer;
    return cfg;
}

RunSpec parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!kKeys.count(key)) throw ConfigError("config key '" + key + "': unknown key");
        if (kv.count(key)) fail(key, "given more than once");
        kv[key] = value;
    }
    for (const auto& key : kRequired) {
        if (!kv.count(key)) fail(key, "missing required key");
    }

    RunSpec spec;
    for (const auto& [key, value] : kv) {
        if (key == "dim") {
            const auto d = int_of(key, value);
            if (d < 1 || d > 3) fail(key, "must be 1, 2 or 3");
            spec.dim = static_cast<int>(d);
        } else if (key == "half_width") {
            spec.half_width = real_of(key, value);
            if (!(spec.half_width > 0.0)) fail(key, "must be positive");
        } else if (key == "points") {
            const auto n = int_of(key, value);
            if (n < 3 || n > 1'000'000) fail(key, "must be an integer >= 3");
            spec.points = static_cast<int>(n);
        } else if (key == "potential") {
            try {
                (void)parse_potential(value);
            } catch (const std::exception& e) {
                fail(key, e.what());
            }
            spec.potential_text = value;
        } else if (key == "p") {
            spec.p = real_of(key, value);
            if (!(spec.p > 1.0 && spec.p < 2.0)) fail(key, "must lie in the open interval (1,2)");
        } else if (key == "lambda_start") {
            spec.schedule.lambda_start = real_of(key, value);
            if (!(spec.schedule.lambda_start > 0.0 && spec.schedule.lambda_start <= 1.0)) {
                fail(key, "must lie in (0,1]");
            }
        } else if (key == "lambda_ratio") {
            spec.schedule.ratio = real_of(key, value);
            if (!(spec.schedule.ratio > 0.0 && spec.schedule.ratio < 1.0)) {
                fail(key, "must lie in the open interval (0,1); the schedule never terminates otherwise");
            }
        } else if (key == "lambda_min") {
            spec.schedule.lambda_min = real_of(key, value);
            if (!(spec.schedule.lambda_min > 0.0)) fail(key, "must be positive");
        } else if (key == "tol_grad") {
            spec.tol_grad = real_of(key, value);
            if (!(spec.tol_grad > 0.0)) fail(key, "must be positive");
        } else if (key == "max_outer") {
            const auto m = int_of(key, value);
            if (m < 1 || m > 100'000'000) fail(key, "must be a positive integer");
            spec.max_outer = static_cast<int>(m);
        } else if (key == "k_solutions") {
            const auto k = int_of(key, value);
            if (k < 1 || k > 1000) fail(key, "must be a positive integer");
            spec.k_solutions = static_cast<int>(k);
        } else if (key == "rng_seed") {
            const auto s = int_of(key, value);
            if (s < 0) fail(key, "must be nonnegative");
            spec.rng_seed = static_cast<std::uint64_t>(s);
        } else if (key == "output_dir") {
            if (value.empty()) fail(key, "must not be empty");
            spec.output_dir = value;
        } else if (key == "emit") {
            spec.emit.clear();
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                if (!kEmit.count(item)) fail(key, "unknown item '" + item + "' (fields, diagnostics, plotdata, checks)");
                spec.emit.insert(item);
            }
        }
    }
    if (!(spec.schedule.lambda_min <= spec.schedule.lambda_start)) {
        fail("lambda_min", "must not exceed lambda_start");
    }
    try {
        (void)bind_potential(spec.grid(), spec.potential());
    } catch (const std::exception& e) {
        fail("potential", e.what());
    }
    return spec;
}

RunSpec load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

}  // namespace logsch
