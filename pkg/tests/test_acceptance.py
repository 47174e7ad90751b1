"""Acceptance gate.  Each criterion records one PASS/FAIL line, printed after the run.

A criterion's line is recorded before its assertions run, so a failing
check still shows up in the summary with its numbers.
"""
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from affine_descent import affine as af
from affine_descent import descent as ds
from affine_descent import gkm

from conftest import random_point

TYPES = ["A1", "A2", "B2", "G2"]
MODULES = Path(__file__).resolve().parent.parent / "demos" / "modules"


def _within(elapsed, limit):
    return f"{elapsed:.1f} s (limit {limit} s)"


# -- criterion 1: stabilizer certificates ---------------------------------------------------

def _complex_point(rnd, datum):
    """Re often on a wall; Im often orthogonal to a root through Re, so Gamma^x is not always trivial."""
    r = datum.rank
    re_part = list(random_point(rnd, r))
    roots = datum.positive_roots
    a = roots[rnd.randrange(len(roots))]
    if rnd.random() < 0.7:
        shift = (rnd.randint(-2, 2) - datum.pairing(re_part, a)) / 2
        wa = datum.weight_coords(a)
        re_part = [x + shift * w for x, w in zip(re_part, wa)]
    cv = datum.coroot(a)
    if r == 2 and rnd.random() < 0.7:
        c = Fraction(rnd.randint(1, 5), rnd.randint(1, 4))
        im = (c * cv[1], -c * cv[0])
    else:
        im = random_point(rnd, r, 4, 1)
    return tuple(re_part), tuple(im)


@pytest.fixture(scope="module")
def certificates(data):
    rnd = random.Random(20240601)
    start = time.perf_counter()
    out = {}
    for label in TYPES:
        d = data(label)
        certs = [af.stabilizer(d, random_point(rnd, d.rank)) for _ in range(200)]
        certs += [af.stabilizer(d, *_complex_point(rnd, d)) for _ in range(50)]
        out[label] = certs
    return out, time.perf_counter() - start


def test_criterion_1_stabilizers(certificates, acceptance):
    certs, build_time = certificates
    start = time.perf_counter()
    bad = [(label, c.re, c.im, c.check()) for label, cs in certs.items() for c in cs if c.check()]
    elapsed = build_time + time.perf_counter() - start
    total = sum(len(cs) for cs in certs.values())
    complex_nontrivial = sum(1 for cs in certs.values() for c in cs if any(c.im) and c.order > 1)
    orders = sorted({c.order for cs in certs.values() for c in cs})
    ok = not bad and elapsed < 60
    acceptance[1] = (ok, f"{total} certificates over {', '.join(TYPES)} (200 rational + 50 complex each, "
                         f"{complex_nontrivial} complex with nontrivial stabilizer, orders {orders}); "
                         f"{len(bad)} invalid; {_within(elapsed, 60)}")
    assert not bad, bad[:3]
    assert elapsed < 60


# -- criterion 2: freeness Hilbert identity ---------------------------------------------------

def test_criterion_2_freeness(data, acceptance):
    start = time.perf_counter()
    checked, mismatches = 0, []
    for label in ("A1", "A2"):
        d = data(label)
        for ideal in af.enumerate_ideals(d, 6):
            g = gkm.build_moment_graph(ideal)
            space = gkm.section_space(g, 6, gkm.FORMAL)
            for k in range(7):
                checked += 1
                if space.dim(k) != gkm.freeness_prediction(g, k):
                    mismatches.append((label, [af.format_element(v) for v in ideal], k))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 120
    acceptance[2] = (ok, f"{checked} (ideal, degree) pairs over all order ideals of size <= 6 in A1 and A2, "
                         f"{len(mismatches)} mismatches; {_within(elapsed, 120)}")
    assert not mismatches, mismatches[:3]
    assert elapsed < 120


# -- criterion 3: adjacency span versus GKM kernel at hbar = 1 ------------------------------------

INTERVALS = {"A1": ["e", "s0", "s1", "s0s1", "s1s0"],
             "A2": ["s0", "s1", "s0s1", "s1s2", "s1s2s1", "s0s1s2"]}


@pytest.fixture(scope="module")
def kernel_reports(data, acceptance):
    start = time.perf_counter()
    reports = {}
    for label, words in INTERVALS.items():
        d = data(label)
        for w in words:
            g = gkm.build_moment_graph(af.interval_from_word(d, w))
            reports[(label, w)] = gkm.kernel_equality_report(g, 6, gkm.HBAR_ONE)
    elapsed = time.perf_counter() - start

    inclusion = all(r.inclusion_holds for r in reports.values())
    from_sat = all(all(row.equal for row in r.rows if row.degree >= r.saturation_degree)
                   for r in reports.values() if r.saturation_degree is not None)
    length1 = all(reports[("A1", w)].saturation_degree == 0
                  and [row.dim_kernel for row in reports[("A1", w)].rows] == [2 * k + 1 for k in range(7)]
                  for w in ("s0", "s1"))
    length2 = {w: reports[("A1", w)] for w in ("s0s1", "s1s0")}
    length2_ok = all(r.saturation_degree == 0 for r in length2.values())
    lags = {f"{lab} {w}": r.max_lag for (lab, w), r in reports.items() if r.max_lag}
    gaps = [row.dim_kernel - row.dim_adjacency for row in length2["s0s1"].rows]
    ok = inclusion and from_sat and length1 and length2_ok and elapsed < 120
    acceptance[3] = (ok, f"inclusion at every degree <= 6 for {len(reports)} intervals: {inclusion}; "
                         f"A1 length-1 saturation 0 with dims 1,3,5,...: {length1}; "
                         f"A1 length-2 saturation 0: {length2_ok} (kernel minus adjacency {gaps}, "
                         f"finite lag {lags}); {_within(elapsed, 120)}")
    return reports, elapsed


def test_criterion_3_inclusion(kernel_reports):
    reports, elapsed = kernel_reports
    for key, rep in reports.items():
        assert rep.inclusion_holds, key
    assert elapsed < 120


def test_criterion_3_equal_from_saturation(kernel_reports):
    reports, _ = kernel_reports
    for key, rep in reports.items():
        if rep.saturation_degree is not None:
            assert all(row.equal for row in rep.rows if row.degree >= rep.saturation_degree), key


def test_criterion_3_length_one(kernel_reports):
    reports, _ = kernel_reports
    for w in ("s0", "s1"):
        rep = reports[("A1", w)]
        assert rep.saturation_degree == 0
        assert [row.dim_kernel for row in rep.rows] == [1, 3, 5, 7, 9, 11, 13]


def test_criterion_3_finite_lag(kernel_reports):
    """Where equality fails the adjacency span still catches up a bounded number of degrees later."""
    reports, _ = kernel_reports
    for key, rep in reports.items():
        assert rep.max_lag is not None and rep.max_lag <= 2, key


@pytest.mark.xfail(strict=True, reason="degree-filtered equality fails for A1 length-2 intervals: "
                                       "a gap of 2 persists at every degree (lag 1)")
def test_criterion_3_length_two_saturation(kernel_reports):
    reports, _ = kernel_reports
    for w in ("s0s1", "s1s0"):
        assert reports[("A1", w)].saturation_degree == 0


# -- criterion 4: averaging section ---------------------------------------------------------------

BETA_POINTS = {
    "A1": [(0,), (1,), (Fraction(1, 2),)],
    "A2": [(0, 0), (1, 0), (0, 1), (Fraction(1, 2), 0), (0, Fraction(1, 2)),
           (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 3), Fraction(1, 3))],
}


def test_criterion_4_beta(data, acceptance):
    start = time.perf_counter()
    failed = []
    n = 0
    for label, points in BETA_POINTS.items():
        d = data(label)
        for x in points:
            g = gkm.build_moment_graph(af.bruhat_ideal(af.extended_stabilizer(d, x)))
            rep = gkm.verify_beta_section(x, g)
            n += 1
            if not rep.ok:
                failed.append((label, x, rep.checks))
    elapsed = time.perf_counter() - start
    ok = not failed and elapsed < 10
    acceptance[4] = (ok, f"{n} points (vertices and face midpoints of A0 in A1, A2): "
                         f"{n - len(failed)} pass retraction, linearity and head/tail checks; "
                         f"{_within(elapsed, 10)}")
    assert not failed, failed
    assert elapsed < 10


# -- criterion 5: invariant theory ----------------------------------------------------------------

FUNDAMENTAL_DEGREES = {"A1": (2,), "A2": (2, 3), "B2": (2, 4), "G2": (2, 6)}


def test_criterion_5_invariants(data, certificates, acceptance):
    certs, _ = certificates
    start = time.perf_counter()
    cache, bad = {}, []
    for label, cs in certs.items():
        d = data(label)
        for c in cs:
            key = (label, frozenset(g.finite.matrix for g in c.elements))
            if key not in cache:
                cache[key] = ds.cst_check(ds.FiniteReflectionGroup(d, c.re, c.elements))
            rep = cache[key]
            if not rep.ok or rep.coinvariant_dim != c.order:
                bad.append((label, c.re, c.order, rep.coinvariant_dim))
    molien_bad = []
    for label, degrees in FUNDAMENTAL_DEGREES.items():
        w = ds.finite_weyl_group(data(label))
        if ds.molien_series(w, 8) != ds.free_algebra_series(degrees, 8):
            molien_bad.append(label)
    elapsed = time.perf_counter() - start
    ok = not bad and not molien_bad and elapsed < 30
    acceptance[5] = (ok, f"coinvariant dim = |Gamma^x| for {sum(len(c) for c in certs.values())} stabilizers "
                         f"({len(cache)} distinct linear groups), {len(bad)} failures; Molien = free series "
                         f"through degree 8 for {', '.join(TYPES)}: {not molien_bad}; {_within(elapsed, 30)}")
    assert not bad, bad[:3]
    assert not molien_bad
    assert elapsed < 30


# -- criterion 6: derived isotropy versus descent -------------------------------------------------------

def test_criterion_6_equivalence(data, acceptance):
    start = time.perf_counter()
    reports = {label: ds.equivalence_witness(data(label), ds.corpus(), ds.default_points(data(label)))
               for label in ("A1", "A2")}
    elapsed = time.perf_counter() - start
    rows = [r for rep in reports.values() for r in rep.rows]
    disagree = [(r.module, r.point) for r in rows if not r.agree]
    sky = [r for r in reports["A1"].rows if r.module == "skyscraper_trivial" and not any(r.point)][0]
    mandatory = sky.naive_isotropy.ok and not sky.derived_isotropy.ok and not sky.descends.ok
    names = sorted({r.module for r in rows})
    ok = not disagree and mandatory and elapsed < 30
    acceptance[6] = (ok, f"{len(rows)} (module, point) entries over A1, A2 for {', '.join(names)}: "
                         f"{len(disagree)} disagreements; skyscraper at 0 naive=true derived=false: "
                         f"{mandatory}; {_within(elapsed, 30)}")
    assert not disagree, disagree
    assert mandatory
    assert elapsed < 30


# -- criterion 7: separation of coincident pairs -------------------------------------------------------

def _short_elements(d, max_len):
    seen = {af.identity(d)}
    frontier = list(seen)
    for _ in range(max_len):
        frontier = [af.compose(g, s) for g in frontier for s in af.affine_simple_reflections(d)]
        frontier = [g for g in frontier if g not in seen]
        seen.update(frontier)
    return sorted(seen, key=af.format_element)


def test_criterion_7_separates(data, acceptance):
    start = time.perf_counter()
    pairs, wrong = 0, []
    rnd = random.Random(7)
    for label in ("A1", "A2"):
        d = data(label)
        points = [p for p in BETA_POINTS[label]] + [random_point(rnd, d.rank, 4, 1) for _ in range(4)]
        gammas = _short_elements(d, 2)
        for y in points:
            stab = af.stabilizer(d, y).elements
            for g in gammas:
                for h in stab:
                    other = af.compose(g, h)
                    pairs += 1
                    if gkm.separates(g, other, af.act(h, y)) or gkm.separates_by_evaluation(g, other, y):
                        wrong.append((label, af.format_element(g), af.format_element(other), y))
    sc = data("A1", "sc")
    e, om = af.identity(sc), af.parse_element(sc, "t[1] w[1]")
    half = (Fraction(1, 2),)
    sc_rule, sc_eval = gkm.separates(e, om, half), gkm.separates_by_evaluation(e, om, half)
    elapsed = time.perf_counter() - start
    ok = not wrong and sc_rule and sc_eval and elapsed < 5
    acceptance[7] = (ok, f"{pairs} coincident adjoint pairs in A1, A2 all non-separated: {not wrong}; "
                         f"sc A1 (e, t[1] w[1]) at 1/2 separates={sc_rule}, by evaluation={sc_eval}; "
                         f"{_within(elapsed, 5)}")
    assert not wrong, wrong[:3]
    assert sc_rule and sc_eval
    assert elapsed < 5


# -- criterion 8: determinism of artifacts --------------------------------------------------------------

FIXTURES = [
    ("root_datum_G2.json", ["root-datum", "--type", "G2", "--format", "json"]),
    ("root_datum_A2_sc.json", ["root-datum", "--type", "A2", "--isogeny", "simply_connected", "--format", "json"]),
    ("stabilizer_A1_0.json", ["stabilizer", "--type", "A1", "--point", "0", "--format", "json"]),
    ("stabilizer_G2_samples.csv", ["stabilizer", "--type", "G2", "--samples", "40", "--format", "csv"]),
    ("stabilizer_B2_complex.json", ["stabilizer", "--type", "B2", "--point", "1/2,0;0,1", "--format", "json"]),
    ("walk_A2.csv", ["walk", "--type", "A2", "--point", "0,0", "--format", "csv"]),
    ("sections_A2_s0s1.csv", ["gkm-sections", "--type", "A2", "--interval", "s0s1", "--maxdeg", "4",
                              "--format", "csv"]),
    ("adjacency_A1_s0.csv", ["adjacency-check", "--type", "A1", "--interval", "s0", "--maxdeg", "6",
                             "--hbar", "1", "--format", "csv"]),
    ("adjacency_A1_s0s1.json", ["adjacency-check", "--type", "A1", "--interval", "s0s1", "--maxdeg", "4",
                                "--format", "json"]),
    ("beta_A2_vertex.json", ["beta-check", "--type", "A2", "--point", "1,0", "--format", "json"]),
    ("separates_sc.json", ["separates", "--type", "A1", "--isogeny", "simply_connected", "--point", "1/2",
                           "--gamma", "e", "--delta", "t[1] w[1]", "--format", "json"]),
    ("invariants_B2.json", ["invariants", "--type", "B2", "--format", "json"]),
    ("equivalence_A1.csv", ["equivalence-report", "--type", "A1", "--format", "csv"]),
    ("equivalence_A2.json", ["equivalence-report", "--type", "A2", "--format", "json"]),
] + [(f"descent_{p.stem}.json", ["descent-check", "--type", "A1", "--module", str(p), "--point", "0",
                                 "--format", "json"])
     for p in sorted(MODULES.glob("*.json"))]

# at 0 these have nontrivial isotropy, so the descent check exits 1
EXPECT_FAILURE = {f"descent_{m}.json" for m in
                  ("skyscraper", "skyscraper_sign", "sign_twist", "regular_representation")}

DRIVER = """
import io, json, sys
from affine_descent.cli import main
out_dir, fixtures = sys.argv[1], json.loads(sys.argv[2])
codes = {}
for name, argv in fixtures:
    buf = io.StringIO()
    codes[name] = main(argv, out=buf)
    with open(f"{out_dir}/{name}", "w", newline="") as fh:
        fh.write(buf.getvalue())
with open(f"{out_dir}/exit_codes.json", "w") as fh:
    json.dump(codes, fh, indent=2, sort_keys=True)
"""


def test_criterion_8_determinism(tmp_path, acceptance):
    start = time.perf_counter()
    runs = []
    for seed in ("0", "12345"):
        out = tmp_path / f"run{seed}"
        out.mkdir()
        env = dict(os.environ, PYTHONHASHSEED=seed)
        subprocess.run([sys.executable, "-c", DRIVER, str(out), json.dumps(FIXTURES)],
                       check=True, env=env, stderr=subprocess.PIPE)
        runs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    elapsed = time.perf_counter() - start
    differ = sorted(k for k in runs[0] if runs[0][k] != runs[1].get(k))
    codes = json.loads(runs[0]["exit_codes.json"])
    unexpected = sorted(k for k, c in codes.items() if c != (1 if k in EXPECT_FAILURE else 0))
    ok = runs[0].keys() == runs[1].keys() and not differ and not unexpected
    acceptance[8] = (ok, f"{len(runs[0])} CSV/JSON artifacts from two runs under different hash seeds: "
                         f"{len(differ)} differ; exit codes as expected: {not unexpected}; {elapsed:.1f} s")
    assert runs[0].keys() == runs[1].keys()
    assert not differ, differ
    assert not unexpected, {k: codes[k] for k in unexpected}
