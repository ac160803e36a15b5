"""Acceptance gate: the ten release criteria, one test and one verdict line
each.

Every criterion prints "criterion NN [label]: PASS|FAIL" so a plain test run
doubles as the release report.  Tolerances are the contract values; none of
them may be loosened here.
"""

import json
import time
from contextlib import contextmanager

import numpy as np

from _gen import (product_field, random_dirac, random_map, random_quadratic,
                  random_structure, subspace_residual)
from ldkit.catalog import damped_particle
from ldkit.cli import EXIT_INCONSISTENT, main
from ldkit.dynamics import IntegratorConfig, oracle_simulate, simulate
from ldkit.fields import ConstraintField, LDField, TensorField, bracket
from ldkit.linear import (classification_residuals, deform, split_pairing,
                          tangent_part, to_pair)
from ldkit.subspaces import project_factor


@contextmanager
def criterion(number, label):
    try:
        yield
    except BaseException:
        print(f"criterion {number:2d} [{label}]: FAIL")
        raise
    print(f"criterion {number:2d} [{label}]: PASS")


def structure_pool(seed, count):
    rng = np.random.default_rng(seed)
    return [random_structure(rng) for _ in range(count)]


def test_criterion_01_structure_laws_fuzz():
    with criterion(1, "structure laws, 1000 instances"):
        start = time.perf_counter()
        for ld, info in structure_pool(101, 1000):
            n = info["n"]
            assert 1 <= n <= 6
            assert ld.space.dim == n
            res = classification_residuals(ld.space)
            assert ld.flags.forward or ld.flags.backward
            if ld.flags.forward:
                assert res["forward"] <= 1e-8
            if ld.flags.backward:
                assert res["backward"] <= 1e-8
            cotangent_image = project_factor(ld.space, "second")
            assert tangent_part(ld).dim + cotangent_image.dim == ld.space.dim
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"fuzz loop took {elapsed:.2f}s"


def test_criterion_02_classification_equivalences():
    with criterion(2, "classification equivalences, 1000 instances"):
        counterexamples = 0
        for ld, _ in structure_pool(202, 1000):
            orientation = "forward" if ld.flags.forward else "backward"
            m = to_pair(ld, orientation).matrix
            scale = max(1.0, float(np.abs(m).max(initial=0.0)))
            sym_res = float(np.abs(m + m.T).max(initial=0.0)) / 2.0
            skew_res = float(np.abs(m - m.T).max(initial=0.0)) / 2.0
            if ld.flags.dirac != (sym_res <= 1e-8 * scale):
                counterexamples += 1
            if ld.flags.symmetric_dirac != (skew_res <= 1e-8 * scale):
                counterexamples += 1
            if ld.flags.separable != (ld.flags.dirac
                                      and ld.flags.symmetric_dirac):
                counterexamples += 1
        assert counterexamples == 0


def test_criterion_03_split_pairing_signature():
    with criterion(3, "split pairing signature (n, n)"):
        for ld, info in structure_pool(303, 1000):
            orientation = "forward" if ld.flags.forward else "backward"
            pairing = split_pairing(ld, orientation)
            assert pairing.signature == (info["n"], info["n"])
            b = ld.space.basis
            isotropy = float(np.abs(b.T @ pairing.gram @ b).max(initial=0.0))
            assert isotropy <= 1e-8


def test_criterion_04_zero_deformation_and_orientation():
    with criterion(4, "deformations"):
        rng = np.random.default_rng(404)
        for _ in range(200):
            ld, n = random_dirac(rng)
            tau = deform(ld, np.zeros((n, n)), "forward")
            nu = deform(ld, np.zeros((n, n)), "backward")
            assert subspace_residual(tau.space, ld.space) <= 1e-10
            assert subspace_residual(nu.space, ld.space) <= 1e-10
            form = random_map(rng, n, "sym")
            assert deform(ld, form, "forward").flags.forward
            assert deform(ld, form, "backward").flags.backward


def _bracket_law_systems():
    rng = np.random.default_rng(505)
    canonical = np.zeros((4, 4))
    canonical[:2, 2:] = np.eye(2)
    canonical[2:, :2] = -np.eye(2)
    poisson = LDField(TensorField.constant(canonical),
                      ConstraintField.none(4))
    metric = LDField(TensorField.constant(-np.diag([1.0, 2.0, 0.5])),
                     ConstraintField.none(3))
    a = rng.standard_normal((4, 4))
    mixed = LDField(TensorField.constant(canonical - a @ a.T),
                    ConstraintField.none(4))
    return [poisson, metric, mixed]


def test_criterion_05_bracket_laws():
    with criterion(5, "Leibniz identities and bracket symmetry"):
        rng = np.random.default_rng(606)
        for field in _bracket_law_systems():
            n = field.n
            for _ in range(200):
                f = random_quadratic(rng, n)
                g = random_quadratic(rng, n)
                h = random_quadratic(rng, n)
                fg = product_field(f, g)
                gh = product_field(g, h)
                for x in rng.standard_normal((20, n)):
                    b_fg = bracket(field, f, g, x)
                    b_fh = bracket(field, f, h, x)
                    b_gh = bracket(field, g, h, x)
                    left = bracket(field, fg, h, x).full
                    left_ref = f(x) * b_gh.full + g(x) * b_fh.full
                    scale = max(1.0, abs(left), abs(left_ref))
                    assert abs(left - left_ref) <= 1e-10 * scale
                    right = bracket(field, f, gh, x).full
                    right_ref = g(x) * b_fh.full + h(x) * b_fg.full
                    scale = max(1.0, abs(right), abs(right_ref))
                    assert abs(right - right_ref) <= 1e-10 * scale
                    b_gf = bracket(field, g, f, x)
                    scale = max(1.0, abs(b_fg.skew), abs(b_fg.sym))
                    assert abs(b_fg.skew + b_gf.skew) <= 1e-12 * scale
                    assert abs(b_fg.sym - b_gf.sym) <= 1e-12 * scale


def test_criterion_06_damped_particle_reference_run():
    with criterion(6, "damped particle, mu = (1, 1, 1)"):
        sys = damped_particle((1.0, 1.0, 1.0))
        x0 = np.array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0])
        start = time.perf_counter()
        traj = simulate(sys, x0, IntegratorConfig(dt=1e-3, t_end=10.0))
        other = oracle_simulate(sys, x0, 1e-3, 10.0)
        elapsed = time.perf_counter() - start
        surface = np.abs(traj.states[:, 1] * traj.states[:, 3]
                         - traj.states[:, 5])
        assert surface.max() <= 1e-8
        assert traj.residuals.max() <= 1e-8
        h = traj.energies
        assert np.diff(h).max(initial=-np.inf) <= 1e-10
        assert np.abs(traj.states - other.states).max() <= 1e-6
        assert elapsed < 5.0, f"reference run took {elapsed:.2f}s"


def test_criterion_07_frictionless_particle_conserves_energy():
    with criterion(7, "conservative limit, mu = 0"):
        sys = damped_particle((0.0, 0.0, 0.0))
        x0 = np.array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0])
        traj = simulate(sys, x0, IntegratorConfig(dt=1e-3, t_end=10.0))
        h = traj.energies
        assert np.abs(h - h[0]).max() <= 1e-8


def test_criterion_08_gradient_flow_exactness():
    with criterion(8, "gradient flow endpoint"):
        from ldkit.catalog import SystemSpec, build_system
        sys, _ = build_system(SystemSpec(name="gradient_flow"))
        traj = simulate(sys, np.array([1.0, 1.0]),
                        IntegratorConfig(dt=1e-3, t_end=1.0))
        assert np.abs(traj.states[-1]
                      - [np.exp(-1.0), np.exp(-2.0)]).max() <= 1e-6
        assert np.diff(traj.energies).max(initial=-np.inf) <= 1e-10


def test_criterion_09_convergence_order():
    with criterion(9, "fourth-order convergence"):
        from ldkit.catalog import SystemSpec, build_system
        harmonic, _ = build_system(SystemSpec(name="harmonic_oscillator"))
        x0 = np.array([1.0, 0.0])
        t_end = 5.0
        exact = np.array([np.cos(t_end), -np.sin(t_end)])
        errs = [np.abs(oracle_simulate(harmonic, x0, dt, t_end).states[-1]
                       - exact).max() for dt in (0.2, 0.1)]
        assert errs[0] / errs[1] >= 8.0

        gradient, _ = build_system(SystemSpec(name="gradient_flow"))
        x0 = np.array([1.0, 1.0])
        t_end = 2.0
        exact = np.array([np.exp(-t_end), np.exp(-2.0 * t_end)])
        errs = [np.abs(oracle_simulate(gradient, x0, dt, t_end).states[-1]
                       - exact).max() for dt in (0.2, 0.1)]
        assert errs[0] / errs[1] >= 8.0


def test_criterion_10_consistency_gate(tmp_path, capsys):
    with criterion(10, "inconsistent states rejected, exit code 4"):
        spec = tmp_path / "run.json"
        spec.write_text(json.dumps({
            "name": "damped_particle",
            "initial_state": [0.0, 0.0, 0.0, 1.0, 0.0, 1.0]}) + "\n",
            encoding="utf-8")
        code = main(["simulate", str(spec), "--dt", "1e-3",
                     "--t-end", "1.0", "--output", str(tmp_path / "t.csv")])
        err = capsys.readouterr().err
        assert code == EXIT_INCONSISTENT
        assert "chi_c" in err
