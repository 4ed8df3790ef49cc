#include "cim/schedule.hpp"

#include "doctest.h"

using namespace cim;

TEST_CASE("linear ramp then plateau") {
    ScheduleParams s;
    s.n_steps = 1000;
    s.dt = 0.4;
    s.t_r = 900;
    s.t_p = 100;
    s.p = {-1.0, 1.0};
    s.alpha = 1.0;
    s.beta = 0.2;

    CHECK(schedule_value(s, Param::p, 0) == -1.0);
    CHECK(schedule_value(s, Param::p, 450) == 0.0);
    CHECK(schedule_value(s, Param::p, 950) == 1.0);
    CHECK(schedule_value(s, Param::p, 900) == 1.0);
    CHECK(schedule_value(s, Param::p, 225) == doctest::Approx(-0.5));

    // fixed parameters return their value everywhere
    CHECK(schedule_value(s, Param::alpha, 0) == 1.0);
    CHECK(schedule_value(s, Param::alpha, 999) == 1.0);
    CHECK(schedule_value(s, Param::beta, 123) == 0.2);

    CHECK_THROWS(schedule_value(s, Param::p, -1));
    CHECK_THROWS(schedule_value(s, Param::p, 1000));
}

TEST_CASE("schedule validation") {
    ScheduleParams s;
    s.n_steps = 100;
    s.dt = 0.1;
    s.t_r = 90;
    s.t_p = 10;
    s.beta = 0.5;
    CHECK_NOTHROW(s.validate(Variant::cac));

    ScheduleParams bad = s;
    bad.t_p = 20;
    CHECK_THROWS(bad.validate(Variant::cac));
    bad = s;
    bad.dt = 0.0;
    CHECK_THROWS(bad.validate(Variant::cac));
    bad = s;
    bad.beta = {-0.1, 0.1};
    CHECK_THROWS(bad.validate(Variant::cac));
    bad = s;
    bad.alpha = 0.0;
    CHECK_THROWS(bad.validate(Variant::cfc));
}

TEST_CASE("shipped presets carry the reference parameter tables") {
    const Preset cac = require_preset("cac-sk");
    CHECK(cac.variant == Variant::cac);
    CHECK(cac.sched.n_steps == 3200);
    CHECK(cac.sched.dt == 0.125);
    CHECK(cac.sched.t_r == 2880);
    CHECK(cac.sched.t_p == 320);
    CHECK(cac.sched.p.start == -1.0);
    CHECK(cac.sched.p.end == 1.0);
    CHECK(cac.sched.alpha.start == 1.0);
    CHECK(cac.sched.alpha.end == 2.5);
    CHECK(cac.sched.beta.start == 0.8);
    CHECK(cac.init.x_std == 1e-4);
    CHECK(cac.init.e0 == 1.0);

    const Preset cfc = require_preset("cfc-sk");
    CHECK(cfc.sched.n_steps == 1000);
    CHECK(cfc.sched.dt == 0.4);
    CHECK(cfc.sched.t_r == 900);
    CHECK(cfc.sched.t_p == 100);
    CHECK(cfc.sched.beta.start == 0.2);
    CHECK(cfc.init.x_std == 0.1);

    const Preset sfc = require_preset("sfc-sk");
    CHECK(sfc.sched.n_steps == 500);
    CHECK(sfc.sched.dt == 0.4);
    CHECK(sfc.sched.c.start == 1.0);
    CHECK(sfc.sched.c.end == 3.0);
    CHECK(sfc.sched.beta.start == 0.3);
    CHECK(sfc.sched.beta.end == 0.1);
    CHECK(sfc.sched.k.start == 0.2);
    CHECK(sfc.init.e0 == 0.0);

    const Preset dsbm = require_preset("dsbm-sk");
    CHECK(dsbm.sched.n_steps == 2000);
    CHECK(dsbm.sched.dt == 1.25);
    CHECK(dsbm.sched.c.start == 0.5);

    const Preset big = require_preset("cac-n1200");
    CHECK(big.sched.n_steps == 8000);
    CHECK(big.sched.t_r == 7200);
    CHECK(big.sched.t_p == 800);

    const Preset tor = require_preset("cac-gset-toroidal-800");
    CHECK(tor.sched.p.start == -4.0);
    CHECK(tor.sched.p.fixed());
    CHECK(tor.sched.n_steps == 5000);
    CHECK(tor.sched.dt == 0.1);
    CHECK(tor.sched.alpha.end == 3.0);
    CHECK(tor.sched.beta.start == 0.3);

    CHECK(find_preset("nope") == nullptr);
    CHECK_THROWS(require_preset("nope"));
}

TEST_CASE("every preset validates and honors t_r + t_p = n_steps") {
    for (const Preset& p : preset_catalog()) {
        CAPTURE(p.name);
        CHECK_NOTHROW(p.sched.validate(p.variant));
        CHECK(p.sched.t_r + p.sched.t_p == p.sched.n_steps);
    }
}

TEST_CASE("preset step rescaling") {
    Preset scaled = scale_preset_steps(require_preset("cac-sk"), 500);
    CHECK(scaled.sched.n_steps == 500);
    CHECK(scaled.sched.t_r == 450);
    CHECK(scaled.sched.t_p == 50);
    CHECK(scaled.sched.dt == 0.125);
    CHECK_NOTHROW(scaled.sched.validate(Variant::cac));

    Preset same = scale_preset_steps(require_preset("sfc-sk"), 500);
    CHECK(same.sched.t_r == 500);
    CHECK(same.sched.t_p == 0);
}
