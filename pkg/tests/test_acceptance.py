"""Acceptance criteria 1-7 at full size.

Each test records one PASS/FAIL line, printed in the pytest terminal summary.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from curvebody import sampling
from curvebody.dynamics import PotentialSpec, integrate
from curvebody.errors import ZeroDivisor
from curvebody.kinematics import PhaseState
from curvebody.ring import RingScalar, SpaceSign, bq_mul
from curvebody.space import lift, pair_vector, vector_add
from curvebody.verify import (
    composition_checks,
    covariance_checks,
    kinematics_checks,
    kinetic_checks,
    separation_checks,
)

SIGNS = (SpaceSign.SPHERE, SpaceSign.HYPERBOLIC)
SEED = 20240601


def report(number, title, ok, detail):
    ACCEPTANCE_LINES[number] = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    assert ok, detail


def _rel_gap(a, b, scale):
    return float(np.max((a - b).magnitude() / scale))


def test_criterion_1_algebra():
    t0 = time.perf_counter()
    worst = 0.0
    for sign in SIGNS:
        rng = np.random.default_rng([SEED, int(sign) + 1, 1])
        p, q, r = (sampling.random_biquaternions(rng, 100_000, sign) for _ in range(3))
        mp, mq, mr = p.magnitude(), q.magnitude(), r.magnitude()
        pq = bq_mul(p, q)
        worst = max(
            worst,
            _rel_gap(bq_mul(pq, r), bq_mul(p, bq_mul(q, r)), mp * mq * mr),
            _rel_gap(pq.bar(), bq_mul(q.bar(), p.bar()), mp * mq),
            _rel_gap(pq.star(), bq_mul(p.star(), q.star()), mp * mq),
        )
        d = pq.norm() - p.norm() * q.norm()
        worst = max(worst, float(np.max(np.hypot(d.re, d.im) / (mp * mq) ** 2)))
    elapsed = time.perf_counter() - t0
    # zero divisors a(1 +- u) must always be rejected, other elements never
    rng = np.random.default_rng([SEED, 9])
    a = rng.normal(size=20_000)
    s = rng.choice([-1.0, 1.0], size=20_000)
    b = a * s * (1 + rng.uniform(1e-6, 1.0, size=20_000))
    missed = false_alarm = 0
    for k in range(a.size):
        try:
            RingScalar(a[k], s[k] * a[k], SpaceSign.SPHERE).invert()
            missed += 1
        except ZeroDivisor:
            pass
        try:
            RingScalar(a[k], b[k], SpaceSign.SPHERE).invert()
        except ZeroDivisor:
            false_alarm += 1
    ok = worst <= 1e-12 and missed == 0 and false_alarm == 0 and elapsed <= 10
    report(1, "algebra laws on 1e5 biquaternions per sign", ok,
           f"max scaled residual {worst:.2e}, zero divisors missed {missed}, "
           f"false alarms {false_alarm}, laws in {elapsed:.2f} s")


def test_criterion_2_addition_rule():
    worst = worst_line = 0.0
    for sign in SIGNS:
        rng = np.random.default_rng([SEED, int(sign) + 1, 2])
        a = sampling.random_ring_vectors(rng, 10_000, sign)
        b = sampling.random_ring_vectors(rng, 10_000, sign)
        oracle = pair_vector(bq_mul(lift(a, normalize=False), lift(b, normalize=False)))
        worst = max(worst, float(np.max((vector_add(a, b) - oracle).magnitude())))
        checks = {c.name: c for c in composition_checks(10_000, SEED, sign)}
        worst_line = max(worst_line, checks["collinear tan/tanh addition"].value)
    ok = worst <= 1e-12 and worst_line <= 1e-13
    report(2, "addition rule equals lift product on 1e4 pairs per sign", ok,
           f"max residual {worst:.2e}, collinear tan/tanh {worst_line:.2e}")


def _run_groups(groups, n):
    checks = [c for sign in SIGNS for g in groups for c in g(n, SEED, sign) if c.asserted]
    failed = [f"{c.space}/{c.name}={c.value:.2e}" for c in checks if not c.passed]
    return checks, failed


def test_criterion_3_kinematics():
    checks, failed = _run_groups((kinematics_checks, covariance_checks), 1000)
    worst_id = max(c.value for c in checks if c.tol == 1e-10)
    worst_cov = max(c.value for c in checks if c.tol == 1e-9)
    report(3, "kinematic identities and covariance on 1e3 configs per sign", not failed,
           f"{len(checks)} checks, identities max {worst_id:.2e}, covariance max {worst_cov:.2e}"
           + (f", failed: {failed}" if failed else ""))


def test_criterion_4_kinetic_audit():
    checks, failed = _run_groups((kinetic_checks,), 1000)
    sep = [c for sign in SIGNS for c in separation_checks(1000, SEED, sign) if "dumbbell" in c.name]
    failed += [f"{c.space}/{c.name}={c.value:.2e}" for c in sep if not c.passed]
    cross = min(c.value for c in checks if c.kind == "min")
    db = max(c.value for c in sep)
    report(4, "kinetic forms agree and separate only for dumbbells", not failed,
           f"{len(checks) + len(sep)} checks, dumbbell cross terms {db:.2e}, "
           f"smallest generic cross term {cross:.2e}" + (f", failed: {failed}" if failed else ""))


def test_criterion_5_small_r():
    ratios = {}
    for sign in SIGNS:
        c = [c for c in separation_checks(1000, SEED, sign) if c.kind == "band"][0]
        ratios[sign.label] = c.value
    ok = all(80 <= v <= 120 for v in ratios.values())
    report(5, "small-separation residual shrinks x(100 +- 20) per decade", ok,
           ", ".join(f"{k} {v:.2f}" for k, v in ratios.items()))


def _circular(sign, rho=0.4, m=1.3, alpha=0.7):
    sph = sign is SpaceSign.SPHERE
    a = math.tan(rho) if sph else math.tanh(rho)
    force = alpha / (math.sin(2 * rho) ** 2 if sph else math.sinh(2 * rho) ** 2)
    speed = math.sqrt(force * a / m)
    w = speed * math.sqrt(1 + int(sign) * a * a)
    period = 2 * math.pi * (math.sin(rho) if sph else math.sinh(rho)) / speed
    return PhaseState([a, 0, 0], [-a, 0, 0], [0, w, 0], [0, -w, 0], sign), m, PotentialSpec("coulomb", alpha), period, a


def test_criterion_6_dynamics():
    t0 = time.perf_counter()
    geo = straight = drift = 0.0
    ratios = []
    for sign in SIGNS:
        st = PhaseState([0, 0, 0], [0.5, 0, 0], [1.0, 0, 0], [0, 0, 0], sign)
        end = integrate(st, 1.0, 1.0, PotentialSpec(), 1e-3, 1000, every=1000)[-1]
        geo = max(geo, abs(end.state.v1[0] - (math.tan(1.0) if sign is SpaceSign.SPHERE else math.tanh(1.0))))

        rng = np.random.default_rng([SEED, int(sign) + 1, 6])
        v0 = sampling.random_points(rng, 1, sign)[0] * 0.5
        w0 = rng.normal(size=3)
        w0 *= 0.5 / np.linalg.norm(w0)
        e = w0 / np.linalg.norm(w0)
        for s in integrate(PhaseState(v0, -v0, w0, -w0, sign), 1.0, 1.0, PotentialSpec(), 1e-3, 1000, every=10):
            d = s.state.v1 - v0
            straight = max(straight, float(np.linalg.norm(d - np.dot(d, e) * e)))

        circ, m, pot, period, a = _circular(sign)
        errs = []
        for dt in (0.05, 0.025):
            n = int(round(period / 2 / dt))
            last = integrate(circ, m, m, pot, period / 2 / n, n, every=n)[-1]
            errs.append(np.linalg.norm(last.state.v1 - [-a, 0, 0]))
        ratios.append(errs[0] / errs[1])

        ecc = PhaseState(circ.v1, circ.v2, 0.8 * circ.w1, 0.8 * circ.w2, sign)
        traj = integrate(ecc, m, m, pot, 1e-3, 10_000, every=10)
        e0 = traj[0].energy
        drift = max(drift, max(abs(s.energy - e0) for s in traj) / abs(e0))
    elapsed = time.perf_counter() - t0
    ok = (geo <= 1e-9 and straight <= 1e-8 and all(12 <= r <= 20 for r in ratios)
          and drift <= 1e-6 and elapsed <= 60)
    report(6, "integrator accuracy, order, energy and straightness", ok,
           f"geodesic {geo:.2e}, straightness {straight:.2e}, dt-halving ratios "
           f"{', '.join(f'{r:.2f}' for r in ratios)}, coulomb drift {drift:.2e}, {elapsed:.1f} s")


CONFIG = """\
space = "hyperbolic"
m1 = 1.0
m2 = 2.5
q1 = [0.3, 0.1, 0.0]
q2 = [-0.2, 0.0, 0.1]
q1dot = [0.0, 0.5, 0.0]
q2dot = [0.1, -0.2, 0.0]
potential = "coulomb"
alpha = 0.4
dt = 0.001
steps = 2000
output_every = 20
"""

HEADER = ("t,q1x,q1y,q1z,q2x,q2y,q2z,q1dotx,q1doty,q1dotz,q2dotx,q2doty,q2dotz,"
          "r,qcx,qcy,qcz,kinetic,potential,energy")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "curvebody.cli", *map(str, args)], capture_output=True)


def test_criterion_7_cli(tmp_path):
    runs = [_cli("verify", "--cases", 1000, "--seed", 7) for _ in range(2)]
    verify_ok = all(r.returncode == 0 for r in runs) and runs[0].stdout == runs[1].stdout
    other = _cli("verify", "--cases", 1000, "--seed", 8)
    cfg = tmp_path / "run.toml"
    cfg.write_text(CONFIG)
    csv_path, json_path = tmp_path / "run.csv", tmp_path / "run.jsonl"
    codes = (_cli("simulate", "--config", cfg, "--out", csv_path).returncode,
             _cli("simulate", "--config", cfg, "--out", json_path, "--format", "jsonl").returncode)
    lines = csv_path.read_bytes().decode("ascii").splitlines()
    header_ok = lines[0] == HEADER
    exact = all("%.17g" % float(c) == c for line in lines[1:] for c in line.split(","))
    rows = [[float(c) for c in line.split(",")] for line in lines[1:]]
    objs = [json.loads(line) for line in json_path.read_text().splitlines()]
    parity = len(rows) == len(objs) == 101 and all(
        list(o) == HEADER.split(",") and list(o.values()) == row for o, row in zip(objs, rows))
    ok = verify_ok and other.returncode == 0 and codes == (0, 0) and header_ok and exact and parity
    report(7, "CLI verify determinism and lossless trajectory files", ok,
           f"verify exits {[r.returncode for r in runs]} identical={runs[0].stdout == runs[1].stdout}, "
           f"simulate exits {codes}, header={header_ok}, %.17g exact={exact}, csv/jsonl parity={parity}")
