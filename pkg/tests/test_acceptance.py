"""Acceptance criteria, one test per criterion.

Each test appends a single PASS/FAIL line to the terminal summary (see
conftest.py) with the tolerance (exact equality throughout) and, where a
time limit applies, the measured wall-clock time.
"""

import json
import time
from itertools import product
from pathlib import Path

import pytest

from omnilie import grammar as G
from omnilie.cli import main
from omnilie.coeff import Poly
from omnilie.dirac import ZStructure, involutivity_check_J, jacobi_check, rigidity_solve, so3
from omnilie.forms import EForm
from omnilie.properties import SuiteConfig, run_suite
from omnilie.sampling import Sampler, suite_rng

from .conftest import ACCEPTANCE_LINES

SEED = 42
SWEEP = [(m, r, n) for m in (1, 2) for r in (1, 2) for n in range(1, m + 2)]
GOLDEN = Path(__file__).parent / "golden" / "verify_seed42.json"
VERIFY_ARGV = ["verify", "--seed", "42", "--trials", "50", "--m", "2", "--r", "2", "--n", "1"]


def record(num: int, title: str, ok: bool, detail: str = ""):
    line = f"C{num:<2} {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LINES.append(line)


def sweep(names, trials, configs=SWEEP):
    """Run named suites over the configs; returns (runs, failures, first counterexample)."""
    runs, failures = 0, []
    for m, r, n in configs:
        cfg = SuiteConfig(m, r, n, SEED, trials)
        for name in names:
            out = run_suite(name, cfg)
            if out.skipped:
                continue
            runs += out.trials
            if not out.ok:
                failures.append((name, (m, r, n), out.counterexample))
    return runs, failures


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_c1_cartan_calculus():
    (runs, bad), dt = _timed(lambda: sweep(["cartan.iota_d", "cartan.lie_d", "cartan.iota_lie"], 50))
    ok = not bad and dt < 60
    record(1, "Cartan identities on jet forms", ok, f"{runs} trials, exact, {dt:.1f}s < 60s")
    assert not bad, bad[0]
    assert dt < 60


def test_c2_omni_properties():
    names = ["omni.i", "omni.ii", "omni.iii", "omni.iv", "omni.v"]
    (runs, bad), dt = _timed(lambda: sweep(names, 50))
    ok = not bad and dt < 120
    record(2, "Leibniz algebroid clauses (i)-(v)", ok, f"{runs} trials, exact, {dt:.1f}s < 120s")
    assert not bad, bad[0]
    assert dt < 120


def test_c3_contracting_homotopy():
    per_degree = [(m, r, n) for m in (1, 2) for r in (1, 2) for n in range(0, m + 2)]
    runs_j, bad_j = sweep(["homotopy.jform"], 25, per_degree)
    shapes = [(m, r, 1) for m in (1, 2) for r in (1, 2)]
    runs_g, bad_g = sweep(["homotopy.genform"], 25, shapes)
    bad = bad_j + bad_g
    record(3, "[dd, iota_Id] = id", not bad, f"{runs_j} jet forms, {runs_g} generic-form trials over all degrees, exact")
    assert not bad, bad[0]


def test_c4_oracle_agreement():
    runs, bad = sweep(["oracle.d", "oracle.iota", "oracle.lie", "oracle.roundtrip"], 50)
    record(4, "pair representation agrees with generic forms", not bad, f"{runs} trials, exact")
    assert not bad, bad[0]


def test_c5_graph_theorem():
    runs, bad = sweep(["graph.exact", "graph.nonclosed", "graph.exactness"], 25)
    record(5, "graphs over DE: Dirac iff closed, closed implies exact", not bad, f"{runs} trials, exact")
    assert not bad, bad[0]


def test_c6_twisted_bracket():
    runs, bad = sweep(["twist.jacobiator", "twist.exact"], 25)
    record(6, "twisted Jacobiator = iota iota iota dd omega", not bad, f"{runs} trials, exact")
    assert not bad, bad[0]


RIGIDITY_CASES = [(2, 1, 2, 0), (2, 2, 2, 0), (3, 1, 2, 0), (3, 1, 3, 0), (2, 1, 2, 1)]


@pytest.mark.xfail(
    strict=True,
    reason="r = 1, n = m admits the isotropic graph vol(x)e -> +-Id, vol_j^dd e -> d_j; see test_dirac",
)
def test_c7_rigidity():
    dims, dt = _timed(lambda: {case: rigidity_solve(*case) for case in RIGIDITY_CASES})
    ok = all(d == 0 for d in dims.values()) and dt < 60
    shown = ", ".join(f"{c}->{d}" for c, d in dims.items())
    record(7, "rigidity: solution dimension 0", ok, f"{shown}; {dt:.1f}s < 60s")
    assert dt < 60
    assert all(d == 0 for d in dims.values()), dims


@pytest.mark.parametrize("case", [c for c in RIGIDITY_CASES if not (c[1] == 1 and c[0] == c[2])])
def test_c7_rigidity_where_it_holds(case):
    assert rigidity_solve(*case) == 0


def test_c8_volume_lie_algebras():
    one = Poly.const(1, 1)
    runs, bad = sweep(["z.equivalence"], 25, [(1, 3, 2), (2, 3, 3)])
    grid = [
        ZStructure(1, 2, Poly.const(1, t), {(0, 0, 1): Poly.const(1, a), (1, 0, 1): Poly.const(1, b)})
        for t, a, b in product((-1, 0, 1, 2), repeat=3)
    ]
    rank2 = all(jacobi_check(Z) and involutivity_check_J(Z) for Z in grid)
    so = bool(jacobi_check(so3(1))) and bool(involutivity_check_J(so3(1)))
    broken = ZStructure(1, 3, one, {(2, 0, 1): one, (0, 1, 2): one, (0, 2, 0): one})
    res = jacobi_check(broken)
    broken_ok = (
        not res
        and not involutivity_check_J(broken)
        and res.detail["jacobiator"] == [Poly.zero(1), Poly.zero(1), -one]
    )
    ok = not bad and rank2 and so and broken_ok
    detail = f"{runs} random r=3, {len(grid)} r=2 grid, so(3) passes, broken example Jacobiator -e3"
    record(8, "involutivity over J_(m+1)E iff Jacobi", ok, detail)
    assert not bad, bad[0]
    assert rank2 and so and broken_ok


def test_c9_membership():
    runs_i, bad_i = sweep(["member.images"], 50)
    runs_p, bad_p = sweep(["member.perturbed"], 10, [(1, 2, 1), (2, 2, 1), (2, 2, 2)])
    bad = bad_i + bad_p
    record(9, "jet-form membership", not bad, f"{runs_i} images pass, {runs_p} gl perturbations fail with genuine witnesses")
    assert not bad, bad[0]


def test_c10_multicontact():
    cfg = [(3, 1, 1)]
    runs_r, bad_r = sweep(["multicontact.roundtrip"], 5, cfg)
    runs_c, bad_c = sweep(["multicontact.contact"], 1, cfg)
    bad = bad_r + bad_c
    record(10, "ker(nu_D) = D, contact form corank 1", not bad, f"{runs_r} distributions x 10 points on R^3, exact")
    assert not bad, bad[0]


def test_c11_trivial_line():
    runs, bad = sweep(["split.trivial_line"], 25)
    record(11, "trivial-line formulas match the general engine", not bad, f"{runs} trials, exact")
    assert not bad, bad[0]


def _fuzz_objects(count: int):
    """Seeded grammar instances cycling through every serializable type."""
    rng = suite_rng(SEED, "grammar.fuzz")
    shapes = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)]
    out = []
    for i in range(count):
        m, r = shapes[i % len(shapes)]
        s = Sampler(rng, m, r, 2)
        kind = i % 6
        if kind == 0:
            obj = s.poly()
        elif kind == 1:
            obj = s.eform(rng.randint(0, m))
        elif kind == 2:
            obj = s.jform(rng.randint(0, m + 1))
        elif kind == 3:
            obj = s.derivation()
        elif kind == 4:
            obj = s.omni(rng.randint(1, m + 1))
        else:
            obj = s.genform(rng.randint(0, 2))
        out.append((obj, m, r))
    return out


def test_c12_cli_determinism(tmp_path):
    def verify_once():
        rc = main(VERIFY_ARGV + ["--out", str(tmp)])
        return rc, tmp.read_bytes()

    tmp = tmp_path / "verify.json"
    (rc1, a), dt = _timed(verify_once)
    rc2, b = verify_once()
    golden = GOLDEN.read_bytes()
    identical = a == b == golden
    report_ok = rc1 == rc2 == 0 and json.loads(a)["ok"] is True

    fuzz = _fuzz_objects(100)
    bad = []
    for obj, m, r in fuzz:
        if isinstance(obj, Poly):
            text = G.format_poly(obj)
            back = G.parse_poly(text, m)
            same = back == obj and G.format_poly(back) == text
        elif isinstance(obj, EForm):
            text = G.format_form(obj)
            back = G.parse_form(text, m, r, obj.k)
            same = back == obj and G.format_form(back) == text
        else:
            text = repr(obj)
            back = G.parse_any(text, m, r)
            same = back == obj and repr(back) == text
        if not same:
            bad.append(text)
    ok = identical and report_ok and not bad
    detail = f"verify seed 42 byte-identical x2 and golden ({dt:.1f}s/run), {len(fuzz) - len(bad)}/100 roundtrips"
    record(12, "CLI determinism and grammar roundtrip", ok, detail)
    assert a == b, "two verify runs differ"
    assert a == golden, "verify report differs from the golden file"
    assert report_ok
    assert not bad, bad[:3]
