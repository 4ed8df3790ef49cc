#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cim {

enum class Variant { cac, cfc, sfc, linear_fb, tanh_fb, dsbm };

const char* variant_name(Variant v);
Variant variant_from_name(std::string_view name);

enum class Param { p, alpha, beta, c, k };

const char* param_name(Param p);

// start == end means the parameter is held fixed.
struct Ramp {
    double start = 0.0;
    double end = 0.0;

    Ramp() = default;
    Ramp(double v) : start(v), end(v) {}
    Ramp(double s, double e) : start(s), end(e) {}
    bool fixed() const { return start == end; }
};

// Linear ramp over the first t_r steps, then held at the end value for the
// remaining t_p plateau steps.
struct ScheduleParams {
    int n_steps = 0;
    double dt = 0.0;
    int t_r = 0;
    int t_p = 0;
    Ramp p{-1.0};
    Ramp alpha{1.0};
    Ramp beta{0.0};
    Ramp c{1.0};
    Ramp k{0.0};
    bool clamp = true;           // amplitude range restriction (see per-variant rules)
    double dsbm_xi_factor = 0.5; // coupling scale for dsbm relative to xi

    const Ramp& ramp(Param which) const;
    Ramp& ramp(Param which);
    void validate(Variant v) const;
};

double schedule_value(const ScheduleParams& sched, Param which, int step);

// Gaussian init for the CIM variants, uniform half-width for dsbm.
struct InitParams {
    double x_std = 0.1;
    double e0 = 1.0;
};

InitParams default_init(Variant v);

struct Preset {
    std::string name;
    Variant variant;
    ScheduleParams sched;
    InitParams init;
    std::string source; // which benchmark family the values come from
};

const std::vector<Preset>& preset_catalog();
const Preset* find_preset(std::string_view name); // nullptr when unknown
Preset require_preset(std::string_view name);     // throws with the known names listed

// Rescale the step budget, keeping dt and shrinking ramp/plateau proportionally.
Preset scale_preset_steps(Preset preset, int new_n_steps);

} // namespace cim
