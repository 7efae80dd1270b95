#include "starpls/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "starpls/channel.hpp"
#include "starpls/parallel.hpp"

namespace starpls {

namespace {

using nlohmann::json;

constexpr std::uint64_t kStreamChannel = 1000;

std::uint64_t scheme_stream_tag(Scheme s) {
    switch (s) {
        case Scheme::proposed: return 1001;
        case Scheme::zf: return 1002;
        case Scheme::conventional_ris: return 1003;
    }
    return 1099;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number())
        throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer())
        throw ConfigError("config key '" + key + "' must be an integer");
    const long long x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError("config key '" + key + "' out of range");
    return static_cast<int>(x);
}

std::uint64_t as_u64(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
        return static_cast<std::uint64_t>(v.get<long long>());
    throw ConfigError("config key '" + key + "' must be a nonnegative integer");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else if (c == '\n' || c == '\r') out += ' ';
        else out += c;
    }
    out += "\"";
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << body;
}

}  // namespace

std::string format_csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SystemConfig config_from_json_text(const std::string& text,
                                   const std::string& origin) {
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("failed to parse " + origin + ": " + e.what());
    }
    if (!parsed.is_object())
        throw ConfigError(origin + ": top-level JSON object expected");

    std::map<std::string, json> kv;
    for (const auto& item : parsed.items()) {
        const std::string key = lower(item.key());
        if (!kv.emplace(key, item.value()).second)
            throw ConfigError(origin + ": duplicate key after case folding: " + key);
    }

    SystemConfig cfg;
    if (auto it = kv.find("preset"); it != kv.end()) {
        if (!it->second.is_string())
            throw ConfigError("config key 'preset' must be a string");
        const std::string preset = it->second.get<std::string>();
        if (preset == "paper_scale") {
            cfg.m = 64;
            cfg.n_t = 9;
        } else if (preset != "desk_scale") {
            throw ConfigError("unknown preset: " + preset);
        }
        kv.erase(it);
    }

    // Conflicting-source bookkeeping per target field.
    int src_ptmax = 0, src_s2b = 0, src_s2c = 0, src_s2e = 0, src_rho = 0;
    bool have_subgrad = false;

    for (const auto& [key, v] : kv) {
        if (key == "n_t") cfg.n_t = as_int(v, key);
        else if (key == "m") cfg.m = as_int(v, key);
        else if (key == "lambda_bits") cfg.lambda_bits = as_int(v, key);
        else if (key == "p_tmax") { cfg.p_tmax = as_number(v, key); ++src_ptmax; }
        else if (key == "p_tmax_dbm") {
            cfg.p_tmax = dbm_to_watts(as_number(v, key));
            ++src_ptmax;
        } else if (key == "sigma2_b") { cfg.sigma2_b = as_number(v, key); ++src_s2b; }
        else if (key == "sigma2_c") { cfg.sigma2_c = as_number(v, key); ++src_s2c; }
        else if (key == "sigma2_e") { cfg.sigma2_e = as_number(v, key); ++src_s2e; }
        else if (key == "sigma2_b_dbm") {
            cfg.sigma2_b = dbm_to_watts(as_number(v, key));
            ++src_s2b;
        } else if (key == "sigma2_c_dbm") {
            cfg.sigma2_c = dbm_to_watts(as_number(v, key));
            ++src_s2c;
        } else if (key == "sigma2_e_dbm") {
            cfg.sigma2_e = dbm_to_watts(as_number(v, key));
            ++src_s2e;
        } else if (key == "sigma2_dbm") {
            const double w = dbm_to_watts(as_number(v, key));
            cfg.sigma2_b = cfg.sigma2_c = cfg.sigma2_e = w;
            ++src_s2b;
            ++src_s2c;
            ++src_s2e;
        } else if (key == "p1") cfg.p1 = as_number(v, key);
        else if (key == "omega1") cfg.omega1 = as_number(v, key);
        else if (key == "omega2") cfg.omega2 = as_number(v, key);
        else if (key == "rho") { cfg.rho = as_number(v, key); ++src_rho; }
        else if (key == "rho_db") {
            cfg.rho = db_to_linear(as_number(v, key));
            ++src_rho;
        } else if (key == "alpha") cfg.alpha = as_number(v, key);
        else if (key == "d_br") cfg.d_br = as_number(v, key);
        else if (key == "d_rb") cfg.d_rb = as_number(v, key);
        else if (key == "d_rc") cfg.d_rc = as_number(v, key);
        else if (key == "d_re") cfg.d_re = as_number(v, key);
        else if (key == "ceo_omega") cfg.ceo_omega = as_number(v, key);
        else if (key == "ceo_eta") cfg.ceo_eta = as_number(v, key);
        else if (key == "ceo_chi") cfg.ceo_chi = as_number(v, key);
        else if (key == "subgrad_step") {
            cfg.subgrad_step = as_number(v, key);
            have_subgrad = true;
        } else if (key == "tol_outer") cfg.tol_outer = as_number(v, key);
        else if (key == "tol_dual") cfg.tol_dual = as_number(v, key);
        else if (key == "tol_ceo") cfg.tol_ceo = as_number(v, key);
        else if (key == "max_outer") cfg.max_outer = as_int(v, key);
        else if (key == "max_dual") cfg.max_dual = as_int(v, key);
        else if (key == "max_ceo") cfg.max_ceo = as_int(v, key);
        else if (key == "seed") cfg.seed = as_u64(v, key);
        else throw ConfigError(origin + ": unknown config key: " + key);
    }

    if (src_ptmax > 1)
        throw ConfigError(origin + ": conflicting keys set p_tmax");
    if (src_s2b > 1 || src_s2c > 1 || src_s2e > 1)
        throw ConfigError(origin + ": conflicting keys set noise powers");
    if (src_rho > 1) throw ConfigError(origin + ": conflicting keys set rho");
    if (src_ptmax == 0) throw ConfigError(origin + ": P_tmax required");

    if (!have_subgrad) cfg.subgrad_step = 0.01 / cfg.p_tmax;

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    return config_from_json_text(read_file(path), path);
}

SystemConfig apply_axis(const SystemConfig& cfg, const std::string& axis,
                        double value) {
    SystemConfig out = cfg;
    const std::string a = lower(axis);
    const auto as_integer = [&](const char* what) {
        if (!(std::isfinite(value)) || value != std::floor(value))
            throw ConfigError(std::string("axis ") + what +
                              " needs an integer value");
        return static_cast<int>(value);
    };
    if (a == "m") out.m = as_integer("M");
    else if (a == "n_t") out.n_t = as_integer("N_t");
    else if (a == "p_tmax_dbm") out.p_tmax = dbm_to_watts(value);
    else if (a == "lambda_bits") out.lambda_bits = as_integer("lambda_bits");
    else if (a == "p1") out.p1 = value;
    else throw ConfigError("unknown sweep axis: " + axis);
    return out;
}

SweepSpec sweep_spec_from_json_text(const std::string& text,
                                    const std::string& origin) {
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("failed to parse " + origin + ": " + e.what());
    }
    if (!parsed.is_object())
        throw ConfigError(origin + ": top-level JSON object expected");

    SweepSpec spec;
    spec.schemes = {Scheme::proposed, Scheme::zf, Scheme::conventional_ris};
    spec.seeds = {1};

    for (const auto& item : parsed.items()) {
        const std::string key = lower(item.key());
        const json& v = item.value();
        if (key == "axis") {
            if (!v.is_string())
                throw ConfigError(origin + ": 'axis' must be a string");
            spec.axis = v.get<std::string>();
        } else if (key == "values") {
            if (!v.is_array() || v.empty())
                throw ConfigError(origin + ": 'values' must be a nonempty array");
            spec.values.clear();
            for (const auto& x : v) spec.values.push_back(as_number(x, "values"));
        } else if (key == "schemes") {
            if (!v.is_array() || v.empty())
                throw ConfigError(origin + ": 'schemes' must be a nonempty array");
            spec.schemes.clear();
            for (const auto& x : v) {
                if (!x.is_string())
                    throw ConfigError(origin + ": scheme names must be strings");
                try {
                    spec.schemes.push_back(scheme_from_name(x.get<std::string>()));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(origin + ": " + e.what());
                }
            }
        } else if (key == "seeds") {
            if (!v.is_array() || v.empty())
                throw ConfigError(origin + ": 'seeds' must be a nonempty array");
            spec.seeds.clear();
            for (const auto& x : v) spec.seeds.push_back(as_u64(x, "seeds"));
        } else {
            throw ConfigError(origin + ": unknown sweep key: " + key);
        }
    }

    if (spec.axis.empty()) throw ConfigError(origin + ": 'axis' required");
    if (spec.values.empty()) throw ConfigError(origin + ": 'values' required");
    apply_axis(SystemConfig{}, spec.axis, spec.values.front());  // axis check
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    return sweep_spec_from_json_text(read_file(path), path);
}

RngStream channel_stream(std::uint64_t seed) {
    return RngStream{seed, kStreamChannel};
}

RngStream scheme_stream(std::uint64_t seed, Scheme s) {
    return RngStream{seed, scheme_stream_tag(s)};
}

std::vector<ResultRecord> run_sweep(const SystemConfig& base,
                                    const SweepSpec& spec) {
    if (spec.values.empty() || spec.seeds.empty() || spec.schemes.empty())
        throw ConfigError("run_sweep: empty sweep spec");

    struct Task {
        Scheme scheme;
        double value;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    tasks.reserve(spec.schemes.size() * spec.values.size() * spec.seeds.size());
    for (Scheme s : spec.schemes)
        for (double v : spec.values)
            for (std::uint64_t seed : spec.seeds) tasks.push_back({s, v, seed});

    std::vector<ResultRecord> records(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) {
        const Task& t = tasks[i];
        ResultRecord rec;
        rec.scheme = scheme_name(t.scheme);
        rec.axis = spec.axis;
        rec.value = t.value;
        rec.seed = t.seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            SystemConfig cfg = apply_axis(base, spec.axis, t.value);
            cfg.seed = t.seed;
            cfg.validate();
            const ChannelSet ch = generate_channels(cfg, channel_stream(t.seed));
            const OptResult r =
                run_scheme(t.scheme, ch, cfg, scheme_stream(t.seed, t.scheme));
            rec.objective = r.report.objective;
            rec.r_b_sec = r.report.r_sec_asymptotic;
            rec.r_c = r.report.r_c;
            rec.r_b = r.report.r_b;
            rec.outer_iterations = r.outer_iterations;
            rec.converged = r.converged;
            rec.trajectory = r.trajectory;
            rec.ok = true;
            rec.status = "ok";
        } catch (const std::exception& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rec.objective = rec.r_b_sec = rec.r_c = rec.r_b = nan;
            rec.ok = false;
            rec.status = e.what();
        }
        rec.wall_time_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0)
                .count();
        records[i] = std::move(rec);
    });
    return records;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("summarize: records nonempty");
    std::vector<SummaryRow> rows;
    const auto find_row = [&](const std::string& scheme,
                              double value) -> SummaryRow& {
        for (SummaryRow& r : rows)
            if (r.scheme == scheme && r.value == value) return r;
        rows.push_back(SummaryRow{scheme, value, 0, 0.0, 0.0, 0.0, 0.0});
        return rows.back();
    };

    for (const ResultRecord& rec : records) find_row(rec.scheme, rec.value);

    for (SummaryRow& row : rows) {
        std::vector<double> obj;
        double sum_sec = 0.0, sum_rc = 0.0;
        for (const ResultRecord& rec : records) {
            if (!rec.ok || rec.scheme != row.scheme || rec.value != row.value)
                continue;
            obj.push_back(rec.objective);
            sum_sec += rec.r_b_sec;
            sum_rc += rec.r_c;
        }
        row.n_ok = static_cast<int>(obj.size());
        if (obj.empty()) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.objective_mean = row.objective_std = nan;
            row.r_b_sec_mean = row.r_c_mean = nan;
            continue;
        }
        double mean = 0.0;
        for (double x : obj) mean += x;
        mean /= obj.size();
        double ss = 0.0;
        for (double x : obj) ss += (x - mean) * (x - mean);
        row.objective_mean = mean;
        row.objective_std = std::sqrt(ss / obj.size());
        row.r_b_sec_mean = sum_sec / obj.size();
        row.r_c_mean = sum_rc / obj.size();
    }
    return rows;
}

std::string emit_summary(const std::vector<ResultRecord>& records) {
    const std::vector<SummaryRow> rows = summarize(records);
    std::string out =
        "scheme             value        n  objective(mean +/- std)   "
        "r_b_sec_mean  r_c_mean\n";
    char buf[256];
    for (const SummaryRow& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%-18s %-10.6g %4d  %12.6f +/- %-10.6f %12.6f %9.6f\n",
                      r.scheme.c_str(), r.value, r.n_ok, r.objective_mean,
                      r.objective_std, r.r_b_sec_mean, r.r_c_mean);
        out += buf;
    }
    return out;
}

void write_sweep_outputs(const std::string& out_dir, const SystemConfig& base,
                         const SweepSpec& spec,
                         const std::vector<ResultRecord>& records) {
    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    fs::create_directories(root / "trajectories");
    const std::string hash = config_hash(base);
    const std::string prelude =
        "# config_hash=" + hash + "\n# axis=" + spec.axis + "\n";

    {
        std::string body = prelude;
        body +=
            "scheme,axis,value,seed,objective,r_b_sec,r_c,r_b,outer_iterations,"
            "converged,ok,status\n";
        for (const ResultRecord& r : records) {
            body += r.scheme + "," + r.axis + "," + format_csv_double(r.value) +
                    "," + std::to_string(r.seed) + "," +
                    format_csv_double(r.objective) + "," +
                    format_csv_double(r.r_b_sec) + "," +
                    format_csv_double(r.r_c) + "," + format_csv_double(r.r_b) +
                    "," + std::to_string(r.outer_iterations) + "," +
                    (r.converged ? "1" : "0") + "," + (r.ok ? "1" : "0") + "," +
                    csv_quote(r.status) + "\n";
        }
        write_text_file(root / "records.csv", body);
    }
    {
        std::string body = prelude;
        body += "scheme,axis,value,n_ok,objective_mean,objective_std,"
                "r_b_sec_mean,r_c_mean\n";
        nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
        for (const SummaryRow& r : summarize(records)) {
            body += r.scheme + "," + spec.axis + "," + format_csv_double(r.value) +
                    "," + std::to_string(r.n_ok) + "," +
                    format_csv_double(r.objective_mean) + "," +
                    format_csv_double(r.objective_std) + "," +
                    format_csv_double(r.r_b_sec_mean) + "," +
                    format_csv_double(r.r_c_mean) + "\n";
            nlohmann::ordered_json jr;
            jr["scheme"] = r.scheme;
            jr["axis"] = spec.axis;
            jr["value"] = r.value;
            jr["n_ok"] = r.n_ok;
            jr["objective_mean"] = r.objective_mean;
            jr["objective_std"] = r.objective_std;
            jr["r_b_sec_mean"] = r.r_b_sec_mean;
            jr["r_c_mean"] = r.r_c_mean;
            jrows.push_back(jr);
        }
        write_text_file(root / "summary.csv", body);
        nlohmann::ordered_json top;
        top["config_hash"] = hash;
        top["axis"] = spec.axis;
        top["rows"] = jrows;
        write_text_file(root / "summary.json", top.dump(2) + "\n");
    }
    {
        std::string body = prelude;
        body += "scheme,axis,value,seed,wall_time_ms\n";
        for (const ResultRecord& r : records) {
            body += r.scheme + "," + r.axis + "," + format_csv_double(r.value) +
                    "," + std::to_string(r.seed) + "," +
                    format_csv_double(r.wall_time_ms) + "\n";
        }
        write_text_file(root / "timings.csv", body);
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        const ResultRecord& r = records[i];
        char name[128];
        std::snprintf(name, sizeof(name), "run_%04zu_%s_s%llu.csv", i,
                      r.scheme.c_str(),
                      static_cast<unsigned long long>(r.seed));
        std::string body = prelude;
        body += "# value=" + format_csv_double(r.value) +
                "\n# seed=" + std::to_string(r.seed) + "\n";
        body += "iteration,objective\n";
        for (std::size_t k = 0; k < r.trajectory.size(); ++k)
            body += std::to_string(k) + "," + format_csv_double(r.trajectory[k]) +
                    "\n";
        write_text_file(root / "trajectories" / name, body);
    }
}

}  // namespace starpls
