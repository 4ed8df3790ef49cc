#include "cim/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace cim {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::cac: return "cac";
        case Variant::cfc: return "cfc";
        case Variant::sfc: return "sfc";
        case Variant::linear_fb: return "linear";
        case Variant::tanh_fb: return "tanh";
        case Variant::dsbm: return "dsbm";
    }
    return "?";
}

Variant variant_from_name(std::string_view name) {
    if (name == "cac") return Variant::cac;
    if (name == "cfc") return Variant::cfc;
    if (name == "sfc") return Variant::sfc;
    if (name == "linear") return Variant::linear_fb;
    if (name == "tanh") return Variant::tanh_fb;
    if (name == "dsbm") return Variant::dsbm;
    throw std::invalid_argument("unknown variant: " + std::string(name) +
                                " (expected cac|cfc|sfc|linear|tanh|dsbm)");
}

const char* param_name(Param p) {
    switch (p) {
        case Param::p: return "p";
        case Param::alpha: return "alpha";
        case Param::beta: return "beta";
        case Param::c: return "c";
        case Param::k: return "k";
    }
    return "?";
}

const Ramp& ScheduleParams::ramp(Param which) const {
    switch (which) {
        case Param::p: return p;
        case Param::alpha: return alpha;
        case Param::beta: return beta;
        case Param::c: return c;
        case Param::k: return k;
    }
    throw std::invalid_argument("unknown parameter id");
}

Ramp& ScheduleParams::ramp(Param which) {
    return const_cast<Ramp&>(static_cast<const ScheduleParams*>(this)->ramp(which));
}

void ScheduleParams::validate(Variant v) const {
    if (n_steps < 0) throw std::invalid_argument("schedule: n_steps must be >= 0");
    if (dt <= 0.0) throw std::invalid_argument("schedule: dt must be > 0");
    if (t_r < 0 || t_p < 0) throw std::invalid_argument("schedule: ramp/plateau lengths must be >= 0");
    if (t_r + t_p != n_steps)
        throw std::invalid_argument("schedule: t_r + t_p must equal n_steps (got " + std::to_string(t_r) +
                                    " + " + std::to_string(t_p) + " != " + std::to_string(n_steps) + ")");
    if (beta.start < 0.0 || beta.end < 0.0) throw std::invalid_argument("schedule: beta must be >= 0");
    if (k.start < 0.0 || k.end < 0.0) throw std::invalid_argument("schedule: k must be >= 0");
    if ((v == Variant::cac || v == Variant::cfc) && (alpha.start <= 0.0 || alpha.end <= 0.0))
        throw std::invalid_argument("schedule: alpha must be > 0 for cac/cfc");
    if (v == Variant::dsbm && dsbm_xi_factor <= 0.0)
        throw std::invalid_argument("schedule: dsbm_xi_factor must be > 0");
}

double schedule_value(const ScheduleParams& sched, Param which, int step) {
    if (step < 0 || step >= std::max(sched.n_steps, 1))
        throw std::out_of_range("schedule_value: step " + std::to_string(step) + " outside [0, " +
                                std::to_string(sched.n_steps) + ")");
    const Ramp& r = sched.ramp(which);
    if (r.fixed() || sched.t_r <= 0) return r.end;
    if (step >= sched.t_r) return r.end;
    return r.start + (r.end - r.start) * (static_cast<double>(step) / sched.t_r);
}

InitParams default_init(Variant v) {
    switch (v) {
        case Variant::cac: return {1e-4, 1.0};
        case Variant::cfc: return {0.1, 1.0};
        case Variant::sfc: return {0.1, 0.0};
        case Variant::linear_fb: return {0.1, 0.0};
        case Variant::tanh_fb: return {0.1, 0.0};
        case Variant::dsbm: return {0.1, 0.0}; // x ~ U(-0.1, 0.1), y = 0
    }
    return {0.1, 0.0};
}

namespace {

ScheduleParams make_sched(int n_steps, double dt, int t_r, int t_p, Ramp p, Ramp alpha, Ramp beta, Ramp c,
                          Ramp k) {
    ScheduleParams s;
    s.n_steps = n_steps;
    s.dt = dt;
    s.t_r = t_r;
    s.t_p = t_p;
    s.p = p;
    s.alpha = alpha;
    s.beta = beta;
    s.c = c;
    s.k = k;
    return s;
}

std::vector<Preset> build_catalog() {
    std::vector<Preset> v;
    auto add = [&](std::string name, Variant var, ScheduleParams sched, std::string source) {
        Preset pr;
        pr.name = std::move(name);
        pr.variant = var;
        pr.sched = sched;
        pr.init = default_init(var);
        pr.source = std::move(source);
        v.push_back(std::move(pr));
    };

    // --- SK / fully connected defaults ---
    add("cac-sk", Variant::cac,
        make_sched(3200, 0.125, 2880, 320, {-1.0, 1.0}, {1.0, 2.5}, 0.8, 1.0, 0.0), "sk");
    add("cfc-sk", Variant::cfc,
        make_sched(1000, 0.4, 900, 100, {-1.0, 1.0}, 1.0, 0.2, 1.0, 0.0), "sk");
    add("sfc-sk", Variant::sfc,
        make_sched(500, 0.4, 500, 0, {-1.0, 1.0}, 1.0, {0.3, 0.1}, {1.0, 3.0}, 0.2), "sk");
    add("dsbm-sk", Variant::dsbm,
        make_sched(2000, 1.25, 2000, 0, 0.0, 1.0, 0.0, 0.5, 0.0), "sk");
    add("cac-n1200", Variant::cac,
        make_sched(8000, 0.125, 7200, 800, {-1.0, 1.0}, {1.0, 2.5}, 0.8, 1.0, 0.0), "sk-1200");
    add("dsbm-n1200", Variant::dsbm,
        make_sched(4000, 1.25, 4000, 0, 0.0, 1.0, 0.0, 0.5, 0.0), "sk-1200");

    // --- fixed-parameter settings used for the dynamics diagnostics ---
    add("sfc-fixed", Variant::sfc,
        make_sched(4000, 0.4, 4000, 0, -1.0, 1.0, 0.3, 1.0, 0.2), "diagnostics");
    add("cfc-fixed", Variant::cfc,
        make_sched(1000, 0.4, 1000, 0, -1.0, 1.0, 0.2, 1.0, 0.0), "diagnostics");
    add("cac-fixed", Variant::cac,
        make_sched(2000, 0.125, 2000, 0, -1.0, 1.0, 0.8, 1.0, 0.0), "diagnostics");

    // --- stochastic runs model a physical round trip of 0.2 lifetimes ---
    add("cfc-sde", Variant::cfc,
        make_sched(2000, 0.2, 1800, 200, {-1.0, 1.0}, 1.0, 0.2, 1.0, 0.0), "sde");

    // --- G-set, keyed by graph family / edge weights / size ---
    auto add_cac_gset = [&](std::string tag, Ramp p, int n_steps, double dt, int t_r, int t_p) {
        add("cac-gset-" + tag, Variant::cac, make_sched(n_steps, dt, t_r, t_p, p, {1.0, 3.0}, 0.3, 1.0, 0.0),
            "gset");
    };
    add_cac_gset("random1-800", {-0.5, 1.0}, 6666, 0.075, 6000, 666);
    add_cac_gset("randompm-800", {-0.5, 1.0}, 6666, 0.075, 6000, 666);
    add_cac_gset("toroidal-800", -4.0, 5000, 0.1, 4500, 500);
    add_cac_gset("planar1-800", -1.0, 20000, 0.05, 18000, 2000);
    add_cac_gset("planarpm-800", -1.0, 20000, 0.05, 18000, 2000);
    add_cac_gset("random1-1000", {-0.5, 1.0}, 10000, 0.1, 9000, 1000);
    add_cac_gset("planar1-1000", -1.0, 20000, 0.05, 18000, 2000);
    add_cac_gset("random1-2000", {-0.5, 1.0}, 20000, 0.1, 19000, 1000);
    add_cac_gset("randompm-2000", {-0.5, 1.0}, 20000, 0.1, 19000, 1000);
    add_cac_gset("toroidal-2000", {-4.0, -3.0}, 20000, 0.1, 19000, 1000);
    add_cac_gset("planar1-2000", {-1.0, -0.5}, 80000, 0.05, 78000, 2000);

    auto add_cfc_gset = [&](std::string tag, Ramp p, int n_steps, double dt, int t_r, int t_p) {
        add("cfc-gset-" + tag, Variant::cfc, make_sched(n_steps, dt, t_r, t_p, p, 1.0, 0.15, 1.0, 0.0),
            "gset");
    };
    add_cfc_gset("random1-800", {-1.0, 1.0}, 4000, 0.125, 3600, 400);
    add_cfc_gset("randompm-800", {-1.0, 1.0}, 2000, 0.25, 1800, 200);
    add_cfc_gset("toroidal-800", {-3.0, -1.0}, 2000, 0.25, 1800, 200);
    add_cfc_gset("planar1-800", {-2.0, 0.0}, 8000, 0.125, 7200, 800);
    add_cfc_gset("planarpm-800", {-2.0, 0.0}, 4000, 0.25, 3600, 400);
    add_cfc_gset("random1-1000", {-1.0, 1.0}, 5000, 0.2, 4500, 500);
    add_cfc_gset("planar1-1000", {-2.0, 0.0}, 16000, 0.125, 15200, 800);
    add_cfc_gset("random1-2000", {-1.0, 1.0}, 10000, 0.2, 9500, 500);
    add_cfc_gset("randompm-2000", {-1.0, 1.0}, 10000, 0.2, 9500, 500);
    add_cfc_gset("toroidal-2000", {-3.0, -1.0}, 40000, 0.1, 39000, 1000);
    add_cfc_gset("planar1-2000a", {-2.0, 0.0}, 80000, 0.05, 78000, 2000);
    add_cfc_gset("planar1-2000b", {-2.0, 0.0}, 40000, 0.1, 39000, 1000);

    auto add_sfc_gset = [&](std::string tag, Ramp c, Ramp beta, double k, int n_steps, double dt) {
        add("sfc-gset-" + tag, Variant::sfc,
            make_sched(n_steps, dt, n_steps, 0, {-1.0, 1.0}, 1.0, beta, c, k), "gset");
    };
    add_sfc_gset("random1-800", {1.0, 3.0}, {0.3, 0.0}, 0.2, 2666, 0.15);
    add_sfc_gset("randompm-800", {1.0, 3.0}, {0.3, 0.0}, 0.2, 500, 0.4);
    add_sfc_gset("toroidal-800", 1.4, {0.05, 0.0}, 0.32, 2500, 0.4);
    add_sfc_gset("random1-1000", {1.4, 4.2}, {0.2, 0.0}, 0.2, 5000, 0.2);

    return v;
}

} // namespace

const std::vector<Preset>& preset_catalog() {
    static const std::vector<Preset> catalog = build_catalog();
    return catalog;
}

const Preset* find_preset(std::string_view name) {
    for (const Preset& p : preset_catalog())
        if (p.name == name) return &p;
    return nullptr;
}

Preset require_preset(std::string_view name) {
    if (const Preset* p = find_preset(name)) return *p;
    std::string msg = "unknown preset '" + std::string(name) + "'; known presets:";
    for (const Preset& p : preset_catalog()) msg += " " + p.name;
    throw std::invalid_argument(msg);
}

Preset scale_preset_steps(Preset preset, int new_n_steps) {
    if (new_n_steps < 0) throw std::invalid_argument("scale_preset_steps: negative step count");
    const ScheduleParams& s = preset.sched;
    ScheduleParams out = s;
    out.n_steps = new_n_steps;
    if (s.n_steps > 0) {
        const double f = static_cast<double>(new_n_steps) / s.n_steps;
        out.t_r = static_cast<int>(std::lround(s.t_r * f));
        out.t_r = std::min(out.t_r, new_n_steps);
        out.t_p = new_n_steps - out.t_r;
    } else {
        out.t_r = new_n_steps;
        out.t_p = 0;
    }
    preset.sched = out;
    return preset;
}

} // namespace cim
