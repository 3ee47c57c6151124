import math
import os

import pytest

import nsdv

CONFIG_DIR = os.environ.get("NSDV_CONFIG_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))


def test_constitutive():
    p = nsdv.ModelParams(1.0, 1.4)
    assert math.isclose(nsdv.pressure(0.5, p), 0.378929, rel_tol=1e-6)
    q = nsdv.ModelParams(0.75, 2.0)
    assert math.isclose(nsdv.f2(1.0, q), 8.0)
    with pytest.raises(nsdv.DomainError):
        nsdv.pressure(-1.0, p)
    with pytest.raises(nsdv.ConfigError):
        nsdv.ModelParams(0.4, 2.0)


def test_equilibrium_run():
    g = nsdv.Grid1D(129, 10.0)
    p = nsdv.ModelParams(0.75, 2.0, 10.0)
    cfg = nsdv.SolverConfig()
    cfg.t_end = 0.2
    tr = nsdv.run(nsdv.equilibrium_state(g), cfg, g, p)
    assert tr.blowup is None
    last = tr.snapshots[-1]
    assert math.isclose(last.time, 0.2)
    assert max(abs(r - 1.0) for r in last.rho) < 1e-12
    d = nsdv.evaluate_monitors(tr)
    assert not d.any_violation()
    assert nsdv.flag_string(d.all_flags()) == "none"


def test_config_roundtrip_and_scenario():
    c = nsdv.load_config(os.path.join(CONFIG_DIR, "smooth_bump.cfg"))
    text = nsdv.serialize_config(c)
    assert nsdv.parse_config(text) == c
    assert len(nsdv.config_hash(c)) == 16
    assert c.initial_kind == "smooth_bump"
    c.n_cells = 256
    c.solver.t_end = 0.1
    init = nsdv.build_initial(c)
    fields = nsdv.effective_fields(init.state, c.grid(), c.model())
    assert len(fields.v) == 256
    tr = nsdv.run(init.state, c.solver, c.grid(), c.model())
    assert len(tr.snapshots) >= 2
    with pytest.raises(nsdv.ConfigError):
        nsdv.parse_config("[model]\nalpha = x\n")


def test_convergence_table():
    t = nsdv.mms_convergence("manufactured-1", 2, "dx2")
    assert len(t.rows) == 2
    assert t.rows[1].error < t.rows[0].error
