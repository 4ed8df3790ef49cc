#include "cim/runner.hpp"
#include "cim/metrics.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cim {

using njson = nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

long long parse_ll(const std::string& tok, const std::string& what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(what + ": cannot parse integer '" + tok + "'");
    }
}

uint64_t parse_u64(const std::string& tok, const std::string& what) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(tok, &pos);
        if (pos != tok.size() || !tok.empty() && tok[0] == '-') throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(what + ": cannot parse seed '" + tok + "'");
    }
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const njson& v) {
    if (v.is_null()) return "";
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q += c;
        }
        q += "\"";
        return q;
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

// JSON has no inf; non-finite values become null in .jsonl ("inf" in .csv).
njson num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

CouplingMatrix load_instance(const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts[0] == "sk") {
        if (parts.size() != 3) throw std::invalid_argument("instance '" + spec + "': expected sk:<n>:<seed>");
        return sk_random(static_cast<int>(parse_ll(parts[1], spec)), parse_u64(parts[2], spec));
    }
    if (parts[0] == "ferro") {
        if (parts.size() != 2) throw std::invalid_argument("instance '" + spec + "': expected ferro:<n>");
        return ferromagnet(static_cast<int>(parse_ll(parts[1], spec)));
    }
    if (parts[0] == "torus") {
        if (parts.size() != 4)
            throw std::invalid_argument("instance '" + spec + "': expected torus:<rows>:<cols>:<seed>");
        return torus_pm(static_cast<int>(parse_ll(parts[1], spec)),
                        static_cast<int>(parse_ll(parts[2], spec)), parse_u64(parts[3], spec));
    }
    return parse_gset_file(spec);
}

uint64_t instance_stream_id(const std::string& spec) { return fnv1a64(spec); }

void RunConfig::validate() const {
    static const std::vector<std::string> known = {"solve",  "bench",  "scale", "noise-sweep",
                                                   "chaos",  "energy", "presets"};
    if (std::find(known.begin(), known.end(), command) == known.end())
        throw std::invalid_argument("command: unknown '" + command + "'");
    if (format != "json" && format != "csv" && format != "both")
        throw std::invalid_argument("format: expected json|csv|both");
    if (steps_override < 0) throw std::invalid_argument("steps: must be >= 0");

    const bool needs_batches =
        command == "solve" || command == "bench" || command == "scale" || command == "noise-sweep";
    if (needs_batches && trajectories < 1) throw std::invalid_argument("trajectories: must be >= 1");
    if ((command == "solve" || command == "bench") && instances.empty())
        throw std::invalid_argument("instances: at least one instance required");
    if (command != "energy" && command != "presets" && presets.empty())
        throw std::invalid_argument("presets: at least one preset required");
    for (const auto& p : presets) require_preset(p);

    if (command == "scale") {
        if (sizes.empty()) throw std::invalid_argument("sizes: at least one problem size required");
        for (int s : sizes)
            if (s < 2) throw std::invalid_argument("sizes: each size must be >= 2");
        if (instances_per_size < 1) throw std::invalid_argument("instances-per-size: must be >= 1");
    }
    if (command == "noise-sweep") {
        if (g_grid.empty()) throw std::invalid_argument("gsq: at least one g^2 grid value required");
        for (double g : g_grid)
            if (!(g > 0.0)) throw std::invalid_argument("gsq: grid values must be > 0");
        if (!(r_b > 0.0) || r_b > 1.0) throw std::invalid_argument("rb: must be in (0, 1]");
    }
    if (command == "chaos") {
        if (checkpoints.empty()) throw std::invalid_argument("checkpoints: at least one step required");
        if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
            throw std::invalid_argument("checkpoints: must be ascending");
        if (pairs < 1) throw std::invalid_argument("pairs: must be >= 1");
        if (!(perturb_std > 0.0)) throw std::invalid_argument("perturb-std: must be > 0");
    }
    if (command == "energy") {
        if (energy_n < 1) throw std::invalid_argument("n: must be >= 1");
        if (mvm < 0.0) throw std::invalid_argument("mvm: must be >= 0");
        energy.validate();
    }
}

namespace {

std::vector<Preset> resolve_presets(const RunConfig& cfg) {
    std::vector<Preset> out;
    for (const auto& name : cfg.presets) {
        Preset p = require_preset(name);
        if (cfg.steps_override > 0) p = scale_preset_steps(p, cfg.steps_override);
        out.push_back(std::move(p));
    }
    return out;
}

void put_params(njson& row, const Preset& pr, const RunConfig& cfg) {
    const ScheduleParams& s = pr.sched;
    row["preset"] = pr.name;
    row["variant"] = variant_name(pr.variant);
    row["n_steps"] = s.n_steps;
    row["dt"] = s.dt;
    row["t_r"] = s.t_r;
    row["t_p"] = s.t_p;
    row["p_start"] = s.p.start;
    row["p_end"] = s.p.end;
    row["alpha_start"] = s.alpha.start;
    row["alpha_end"] = s.alpha.end;
    row["beta_start"] = s.beta.start;
    row["beta_end"] = s.beta.end;
    row["c_start"] = s.c.start;
    row["c_end"] = s.c.end;
    row["k_start"] = s.k.start;
    row["k_end"] = s.k.end;
    row["clamp"] = s.clamp;
    row["dsbm_xi_factor"] = s.dsbm_xi_factor;
    row["init_x_std"] = pr.init.x_std;
    row["init_e"] = pr.init.e0;
    row["trajectories"] = cfg.trajectories;
    row["seed"] = cfg.seed;
}

double total_weight_upper(const CouplingMatrix& J) {
    double w = 0.0;
    for (int i = 0; i < J.n(); ++i) {
        J.for_row(i, [&](int j, double wij) {
            if (j > i) w += wij;
        });
    }
    return w;
}

BatchOptions batch_options(const RunConfig& cfg, uint64_t instance_id) {
    BatchOptions opt;
    opt.n_trajectories = cfg.trajectories;
    opt.master_seed = cfg.seed;
    opt.instance_id = instance_id;
    opt.threads = cfg.threads;
    opt.serial = cfg.serial;
    opt.track_energy = cfg.track_energy;
    return opt;
}

struct TargetPolicy {
    enum Kind { automatic, brute, best_found, explicit_value } kind = automatic;
    double value = 0.0;
};

TargetPolicy parse_target(const std::string& s) {
    TargetPolicy t;
    if (s == "auto") t.kind = TargetPolicy::automatic;
    else if (s == "brute") t.kind = TargetPolicy::brute;
    else if (s == "best-found") t.kind = TargetPolicy::best_found;
    else {
        try {
            size_t pos = 0;
            t.value = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            t.kind = TargetPolicy::explicit_value;
        } catch (...) {
            throw std::invalid_argument("target: expected auto|brute|best-found|<energy>");
        }
    }
    return t;
}

void write_outputs(const RunConfig& cfg, const std::vector<njson>& rows,
                   const std::vector<std::string>& columns, std::ostream& log) {
    if (cfg.out_path.empty()) return;
    if (cfg.format == "json" || cfg.format == "both") {
        const std::string path = cfg.out_path + ".jsonl";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        for (const auto& r : rows) f << r.dump() << '\n';
        log << "wrote " << path << " (" << rows.size() << " rows)\n";
    }
    if (cfg.format == "csv" || cfg.format == "both") {
        const std::string path = cfg.out_path + ".csv";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        for (size_t i = 0; i < columns.size(); ++i) f << (i ? "," : "") << columns[i];
        f << '\n';
        for (const auto& r : rows) {
            for (size_t i = 0; i < columns.size(); ++i) {
                f << (i ? "," : "");
                auto it = r.find(columns[i]);
                if (it != r.end()) f << csv_cell(*it);
            }
            f << '\n';
        }
        log << "wrote " << path << " (" << rows.size() << " rows)\n";
    }
}

const std::vector<std::string> kBatchColumns = {
    "row_type",     "command",      "instance",    "n",          "preset",       "variant",
    "n_steps",      "dt",           "t_r",         "t_p",        "p_start",      "p_end",
    "alpha_start",  "alpha_end",    "beta_start",  "beta_end",   "c_start",      "c_end",
    "k_start",      "k_end",        "clamp",       "dsbm_xi_factor", "init_x_std", "init_e",
    "trajectories", "seed",         "target_energy", "target_source", "ps",      "ps_wilson_lo",
    "ps_wilson_hi", "tts_steps",    "mvm_to_solution", "best_energy", "best_cut", "final_ground_fraction",
    "first_hit_median", "divergences", "tts_median",  "tts_p25",    "tts_p75",     "instances_solved",
    "instances_total", "fit_a",     "fit_b",       "fit_r_squared", "size"};

njson batch_row(const RunConfig& cfg, const std::string& spec, const CouplingMatrix& J, const Preset& pr,
                const BatchResult& batch, double target, const std::string& target_source) {
    njson row;
    row["row_type"] = "instance";
    row["command"] = cfg.command;
    row["instance"] = spec;
    row["n"] = J.n();
    put_params(row, pr, cfg);
    row["target_energy"] = num_or_null(target);
    row["target_source"] = target_source;

    BatchResult b = batch;
    b.target_energy = target;
    const double ps = success_probability(b);
    const TtsReport rep = tts_report(b);
    int hits = static_cast<int>(std::lround(ps * b.n_traj));
    auto [lo, hi] = wilson_interval(hits, b.n_traj);
    row["ps"] = ps;
    row["ps_wilson_lo"] = lo;
    row["ps_wilson_hi"] = hi;
    row["tts_steps"] = num_or_null(rep.tts_steps);
    row["mvm_to_solution"] = num_or_null(rep.mvm_to_solution);
    const double best = b.min_best();
    row["best_energy"] = num_or_null(best);
    row["best_cut"] = num_or_null(std::isfinite(best) ? (total_weight_upper(J) - best) / 2.0 : kInf);
    if (hits > 0) {
        row["final_ground_fraction"] = final_state_ground_fraction(b);
    } else {
        row["final_ground_fraction"] = nullptr;
    }
    std::vector<double> hit_steps;
    for (int t = 0; t < b.n_traj; ++t)
        if (b.best_energy[t] <= target) hit_steps.push_back(b.first_hit[t]);
    row["first_hit_median"] = hit_steps.empty() ? njson(nullptr) : njson(percentile(hit_steps, 0.5));
    row["divergences"] = b.divergence_count();
    return row;
}

int run_solve_bench(const RunConfig& cfg, std::ostream& log) {
    const std::vector<Preset> presets = resolve_presets(cfg);
    const TargetPolicy policy = parse_target(cfg.target);

    std::vector<njson> rows;
    // per preset, per-instance tts values for the aggregate rows
    std::vector<std::vector<double>> agg_tts(presets.size());
    std::vector<int> agg_solved(presets.size(), 0);

    for (const auto& spec : cfg.instances) {
        const CouplingMatrix J = load_instance(spec);
        const uint64_t id = instance_stream_id(spec);

        std::vector<BatchResult> batches;
        for (const auto& pr : presets) {
            log << "running " << spec << " / " << pr.name << " (" << cfg.trajectories << " trajectories, "
                << pr.sched.n_steps << " steps)\n";
            batches.push_back(run_batch(pr.variant, J, pr.sched, batch_options(cfg, id)));
        }

        double target = kInf;
        std::string source;
        switch (policy.kind) {
            case TargetPolicy::brute:
                target = brute_force_ground(J).energy;
                source = "brute-force";
                break;
            case TargetPolicy::explicit_value:
                target = policy.value;
                source = "explicit";
                break;
            case TargetPolicy::automatic:
                if (J.n() <= 24) {
                    target = brute_force_ground(J).energy;
                    source = "brute-force";
                    break;
                }
                [[fallthrough]];
            case TargetPolicy::best_found:
                for (const auto& b : batches) target = std::min(target, b.min_best());
                source = "best-found";
                break;
        }

        for (size_t pi = 0; pi < presets.size(); ++pi) {
            njson row = batch_row(cfg, spec, J, presets[pi], batches[pi], target, source);
            log << "  " << presets[pi].name << ": Ps=" << csv_cell(row["ps"])
                << " tts=" << csv_cell(row["tts_steps"]) << " best=" << csv_cell(row["best_energy"])
                << "\n";
            const njson& t = row["tts_steps"];
            agg_tts[pi].push_back(t.is_null() ? kInf : t.get<double>());
            if (row["ps"].get<double>() > 0.0) ++agg_solved[pi];
            rows.push_back(std::move(row));
        }
    }

    if (cfg.instances.size() > 1) {
        for (size_t pi = 0; pi < presets.size(); ++pi) {
            njson row;
            row["row_type"] = "aggregate";
            row["command"] = cfg.command;
            put_params(row, presets[pi], cfg);
            auto qs = percentiles(agg_tts[pi], {0.25, 0.5, 0.75});
            row["tts_p25"] = num_or_null(qs[0]);
            row["tts_median"] = num_or_null(qs[1]);
            row["tts_p75"] = num_or_null(qs[2]);
            row["instances_solved"] = agg_solved[pi];
            row["instances_total"] = static_cast<int>(cfg.instances.size());
            log << presets[pi].name << ": median tts=" << format_double(qs[1]) << " (p25 "
                << format_double(qs[0]) << ", p75 " << format_double(qs[2]) << "), solved "
                << agg_solved[pi] << "/" << cfg.instances.size() << "\n";
            rows.push_back(std::move(row));
        }
    }

    write_outputs(cfg, rows, kBatchColumns, log);
    return 0;
}

int run_scale(const RunConfig& cfg, std::ostream& log) {
    const Preset base = resolve_presets(cfg).at(0);
    std::vector<njson> rows;
    std::vector<std::pair<double, double>> fit_points;

    for (int size : cfg.sizes) {
        std::vector<double> tts_values;
        for (int k = 0; k < cfg.instances_per_size; ++k) {
            const uint64_t sk_seed = mix64(cfg.seed ^ (static_cast<uint64_t>(size) << 20) ^ static_cast<uint64_t>(k));
            std::ostringstream spec;
            spec << "sk:" << size << ":" << sk_seed;
            const CouplingMatrix J = load_instance(spec.str());
            BatchResult b = run_batch(base.variant, J, base.sched, batch_options(cfg, instance_stream_id(spec.str())));
            const double target = b.min_best();
            njson row = batch_row(cfg, spec.str(), J, base, b, target, "best-found");
            row["size"] = size;
            tts_values.push_back(row["tts_steps"].is_null() ? kInf : row["tts_steps"].get<double>());
            rows.push_back(std::move(row));
        }
        auto qs = percentiles(tts_values, {0.25, 0.5, 0.75});
        njson agg;
        agg["row_type"] = "aggregate";
        agg["command"] = cfg.command;
        agg["size"] = size;
        put_params(agg, base, cfg);
        agg["tts_p25"] = num_or_null(qs[0]);
        agg["tts_median"] = num_or_null(qs[1]);
        agg["tts_p75"] = num_or_null(qs[2]);
        rows.push_back(agg);
        log << "n=" << size << ": median tts=" << format_double(qs[1]) << "\n";
        if (std::isfinite(qs[1]) && qs[1] > 0) fit_points.push_back({static_cast<double>(size), qs[1]});
    }

    if (fit_points.size() >= 2) {
        ScalingFit fit = scaling_fit(fit_points);
        njson row;
        row["row_type"] = "fit";
        row["command"] = cfg.command;
        put_params(row, base, cfg);
        row["fit_a"] = fit.a;
        row["fit_b"] = fit.b;
        row["fit_r_squared"] = fit.r_squared;
        rows.push_back(row);
        log << "fit: tts ~= " << format_double(fit.a) << " * " << format_double(fit.b)
            << "^sqrt(n), R^2=" << format_double(fit.r_squared) << "\n";
    } else {
        log << "fit skipped: fewer than two sizes with finite median tts\n";
    }

    write_outputs(cfg, rows, kBatchColumns, log);
    return 0;
}

const std::vector<std::string> kNoiseColumns = {
    "row_type", "command", "preset", "variant", "g_sq", "r_b", "mean_ps", "median_mvm",
    "median_e_main", "median_e_total", "n_steps", "dt", "trajectories", "seed", "optimal"};

int run_noise_sweep(const RunConfig& cfg, std::ostream& log) {
    const Preset pr = resolve_presets(cfg).at(0);
    if (pr.variant != Variant::cac && pr.variant != Variant::cfc && pr.variant != Variant::sfc)
        throw std::invalid_argument("presets: noise-sweep needs a cac/cfc/sfc preset");

    std::vector<std::string> specs = cfg.instances;
    if (specs.empty()) {
        for (int k = 0; k < 10; ++k) {
            std::ostringstream s;
            s << "sk:100:" << mix64(cfg.seed ^ static_cast<uint64_t>(k + 1));
            specs.push_back(s.str());
        }
        log << "no instances given; using 10 generated sk:100 instances\n";
    }

    std::vector<CouplingMatrix> instances;
    std::vector<double> targets;
    for (const auto& spec : specs) {
        CouplingMatrix J = load_instance(spec);
        // deterministic anchor run fixes the target energy
        BatchResult anchor = run_batch(pr.variant, J, pr.sched, batch_options(cfg, instance_stream_id(spec)));
        double target = anchor.min_best();
        if (J.n() <= 24) target = std::min(target, brute_force_ground(J).energy);
        targets.push_back(target);
        instances.push_back(std::move(J));
        log << "anchor " << spec << ": target=" << format_double(targets.back()) << "\n";
    }

    NoiseParams noise;
    noise.r_b = cfg.r_b;
    noise.rng_seed = cfg.seed;
    EnergyParams ep = cfg.energy;
    ep.roundtrip_dt = pr.sched.dt;

    GsqSweepResult sweep = optimal_g_sq(instances, targets, pr.variant, pr.sched, noise, cfg.g_grid, ep,
                                        batch_options(cfg, fnv1a64("noise-sweep")));

    std::vector<njson> rows;
    for (size_t i = 0; i < sweep.points.size(); ++i) {
        const auto& pt = sweep.points[i];
        njson row;
        row["row_type"] = "grid-point";
        row["command"] = cfg.command;
        row["preset"] = pr.name;
        row["variant"] = variant_name(pr.variant);
        row["g_sq"] = pt.g_sq;
        row["r_b"] = cfg.r_b;
        row["mean_ps"] = pt.mean_ps;
        row["median_mvm"] = num_or_null(pt.median_mvm);
        row["median_e_main"] = num_or_null(pt.median_e_main);
        EnergyParams p2 = ep;
        p2.g_sq = pt.g_sq;
        row["median_e_total"] =
            std::isfinite(pt.median_mvm)
                ? njson(energy_report(pt.median_mvm, instances[0].n(), p2).e_total)
                : njson(nullptr);
        row["n_steps"] = pr.sched.n_steps;
        row["dt"] = pr.sched.dt;
        row["trajectories"] = cfg.trajectories;
        row["seed"] = cfg.seed;
        row["optimal"] = static_cast<int>(i) == sweep.best_index;
        log << "g^2=" << format_double(pt.g_sq) << ": mean Ps=" << format_double(pt.mean_ps)
            << " median mvm=" << format_double(pt.median_mvm)
            << " e_main=" << format_double(pt.median_e_main)
            << (static_cast<int>(i) == sweep.best_index ? "  <- optimal" : "") << "\n";
        rows.push_back(std::move(row));
    }
    write_outputs(cfg, rows, kNoiseColumns, log);
    return 0;
}

const std::vector<std::string> kChaosColumns = {"row_type", "command",  "instance", "preset",
                                                "variant",  "step",     "mean_r",   "min_r",
                                                "max_r",    "n_pairs",  "n_undefined", "perturb_std",
                                                "init_x_std", "seed"};

int run_chaos(const RunConfig& cfg, std::ostream& log) {
    const Preset pr = resolve_presets(cfg).at(0);
    std::string spec = cfg.instances.empty() ? "" : cfg.instances[0];
    if (spec.empty()) {
        std::ostringstream s;
        s << "sk:100:" << mix64(cfg.seed ^ 0xc4a05ULL);
        spec = s.str();
        log << "no instance given; using " << spec << "\n";
    }
    const CouplingMatrix J = load_instance(spec);
    const uint64_t id = instance_stream_id(spec);

    std::vector<std::vector<double>> per_checkpoint(cfg.checkpoints.size());
    std::vector<int> undefined(cfg.checkpoints.size(), 0);
    for (int pair = 0; pair < cfg.pairs; ++pair) {
        const uint64_t seed = derive_seed(cfg.seed, id, static_cast<uint64_t>(pair));
        auto corr = perturbation_correlation(pr.variant, J, pr.sched, seed, cfg.perturb_std,
                                             cfg.checkpoints, cfg.chaos_init_std);
        for (size_t ci = 0; ci < corr.size(); ++ci) {
            if (std::isnan(corr[ci].r)) ++undefined[ci];
            else per_checkpoint[ci].push_back(corr[ci].r);
        }
    }

    std::vector<njson> rows;
    for (size_t ci = 0; ci < cfg.checkpoints.size(); ++ci) {
        njson row;
        row["row_type"] = "checkpoint";
        row["command"] = cfg.command;
        row["instance"] = spec;
        row["preset"] = pr.name;
        row["variant"] = variant_name(pr.variant);
        row["step"] = cfg.checkpoints[ci];
        const auto& rs = per_checkpoint[ci];
        if (rs.empty()) {
            row["mean_r"] = nullptr;
            row["min_r"] = nullptr;
            row["max_r"] = nullptr;
        } else {
            double mean = 0, mn = rs[0], mx = rs[0];
            for (double r : rs) {
                mean += r;
                mn = std::min(mn, r);
                mx = std::max(mx, r);
            }
            mean /= static_cast<double>(rs.size());
            row["mean_r"] = mean;
            row["min_r"] = mn;
            row["max_r"] = mx;
            log << "step " << cfg.checkpoints[ci] << ": mean r=" << format_double(mean) << "\n";
        }
        row["n_pairs"] = cfg.pairs;
        row["n_undefined"] = undefined[ci];
        row["perturb_std"] = cfg.perturb_std;
        row["init_x_std"] = cfg.chaos_init_std;
        row["seed"] = cfg.seed;
        rows.push_back(std::move(row));
    }
    write_outputs(cfg, rows, kChaosColumns, log);
    return 0;
}

const std::vector<std::string> kEnergyColumns = {
    "row_type", "command", "n", "mvm", "g_sq", "roundtrip_dt", "photon_energy", "e_main",
    "e_correction", "e_factory", "e_total", "e_gpu", "e_correction_simplified", "e_factory_simplified"};

int run_energy(const RunConfig& cfg, std::ostream& log) {
    EnergyReport rep = energy_report(cfg.mvm, cfg.energy_n, cfg.energy);
    njson row;
    row["row_type"] = "energy";
    row["command"] = cfg.command;
    row["n"] = cfg.energy_n;
    row["mvm"] = cfg.mvm;
    row["g_sq"] = cfg.energy.g_sq;
    row["roundtrip_dt"] = cfg.energy.roundtrip_dt;
    row["photon_energy"] = cfg.energy.photon_energy;
    row["e_main"] = rep.e_main;
    row["e_correction"] = rep.e_correction;
    row["e_factory"] = rep.e_factory;
    row["e_total"] = rep.e_total;
    row["e_gpu"] = rep.e_gpu;
    row["e_correction_simplified"] = rep.e_correction_simplified;
    row["e_factory_simplified"] = rep.e_factory_simplified;
    log << "e_main=" << format_double(rep.e_main) << " J, e_correction=" << format_double(rep.e_correction)
        << " J, e_factory=" << format_double(rep.e_factory) << " J, e_total=" << format_double(rep.e_total)
        << " J, e_gpu=" << format_double(rep.e_gpu) << " J\n";
    write_outputs(cfg, {row}, kEnergyColumns, log);
    return 0;
}

int run_presets(std::ostream& log) {
    for (const Preset& p : preset_catalog()) {
        const ScheduleParams& s = p.sched;
        log << p.name << ": variant=" << variant_name(p.variant) << " n_steps=" << s.n_steps
            << " dt=" << s.dt << " t_r=" << s.t_r << " t_p=" << s.t_p;
        auto ramp = [&](const char* name, const Ramp& r) {
            log << " " << name << "=";
            if (r.fixed()) log << r.start;
            else log << r.start << "->" << r.end;
        };
        ramp("p", s.p);
        ramp("alpha", s.alpha);
        ramp("beta", s.beta);
        ramp("c", s.c);
        ramp("k", s.k);
        log << " init_x_std=" << p.init.x_std << " init_e=" << p.init.e0;
        if (p.variant == Variant::dsbm) log << " dsbm_xi_factor=" << s.dsbm_xi_factor;
        log << " [" << p.source << "]\n";
    }
    return 0;
}

} // namespace

int run_command(const RunConfig& cfg, std::ostream& log) {
    try {
        cfg.validate();
        if (cfg.command == "presets") return run_presets(log);
        if (cfg.command == "solve" || cfg.command == "bench") return run_solve_bench(cfg, log);
        if (cfg.command == "scale") return run_scale(cfg, log);
        if (cfg.command == "noise-sweep") return run_noise_sweep(cfg, log);
        if (cfg.command == "chaos") return run_chaos(cfg, log);
        if (cfg.command == "energy") return run_energy(cfg, log);
        throw std::invalid_argument("command: unknown '" + cfg.command + "'");
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace cim
