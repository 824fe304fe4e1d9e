import itertools
import json
from dataclasses import replace
from fractions import Fraction

import pytest

from boxperfect.boxtdi import (BoxCertificate, RRecord, box_tdi_falsify_search, build_R_graph,
                               frac_str, integral_dual_optimum, make_R_certificate,
                               parse_frac, smallest_prime_above, verify_certificate)
from boxperfect.cliques import maximal_cliques
from boxperfect.config import Budgets
from boxperfect.constructions import build_named
from boxperfect.errors import BudgetExceeded, PreconditionError
from boxperfect.graph import Graph
from boxperfect.search import is_isomorphic
from boxperfect.suite import h_certificate, r_pipeline_inputs

from conftest import random_graph

F = Fraction


def _dual_brute(g: Graph, u, w) -> Fraction:
    masks = list(maximal_cliques(g).cliques)
    top = max(w, default=0)
    best = None
    for ys in itertools.product(range(top + 1), repeat=len(masks)):
        cov = [sum(y for y, m in zip(ys, masks) if m >> v & 1) for v in range(g.n)]
        val = sum(ys) + sum((F(u[v]) * max(0, w[v] - cov[v]) for v in range(g.n)), F(0))
        if best is None or val < best:
            best = val
    return best


def test_frac_round_trip():
    for a in (F(0), F(3), F(-7, 4), F(22, 7)):
        assert parse_frac(frac_str(a)) == a
    assert frac_str(F(1, 2)) == "1/2" and frac_str(F(4)) == "4/1"
    assert parse_frac(3) == 3
    with pytest.raises(ValueError):
        parse_frac("x")


def test_smallest_prime_above():
    assert [smallest_prime_above(k) for k in (1, 2, 3, 7, 13)] == [2, 3, 5, 11, 17]


def test_h_certificate_verifies():
    h, cert = h_certificate()
    rep = verify_certificate(h, cert, exhaustive_dual=True)
    assert rep.passed, rep.failed
    assert rep.value == F(7, 4)
    assert rep.integral_dual >= 2


def test_certificate_json_round_trip():
    _, cert = h_certificate()
    text = json.dumps(cert.to_json(), sort_keys=True)
    assert BoxCertificate.from_json(json.loads(text)) == cert


@pytest.mark.parametrize("field,mutate,name", [
    ("x", lambda c: c.x[:4] + (c.x[4] + 1,) + c.x[5:], "primal_feasibility"),
    ("y", lambda c: (c.y[0] + F(1, 3),) + c.y[1:], "dual_feasibility"),
    ("value", lambda c: c.value + 1, "objective"),
])
def test_corruptions_are_named(field, mutate, name):
    h, cert = h_certificate()
    bad = replace(cert, **{field: mutate(cert)})
    rep = verify_certificate(h, bad)
    assert not rep.passed and name in rep.failed


def test_dimension_and_row_errors():
    h, cert = h_certificate()
    rep = verify_certificate(h, replace(cert, y=cert.y[:-1]))
    assert rep.failed == ["dimensions"]
    rows = cert.rows[:-1] + ((1, 3),)
    rep = verify_certificate(h, replace(cert, rows=rows))
    assert "rows" in rep.failed


@pytest.mark.parametrize("name", ["S_3", "S_5", "barS3plus"])
def test_r_pipeline(name):
    gp, us, vs, g2, expected = r_pipeline_inputs()[name]
    g, rec = build_R_graph(gp, us, vs, g2)
    assert is_isomorphic(g, expected)
    assert RRecord.from_json(json.loads(json.dumps(rec.to_json()))) == rec
    cert = make_R_certificate(g, rec)
    rep = verify_certificate(g, cert, exhaustive_dual=True)
    assert rep.passed, rep.failed
    assert rep.integral_dual > rep.value


def test_r_certificate_values():
    gp, us, vs, g2, _ = r_pipeline_inputs()["S_3"]
    g, rec = build_R_graph(gp, us, vs, g2)
    assert rec.m == 1 and not rec.deleted
    assert make_R_certificate(g, rec).value == F(3, 10)
    assert make_R_certificate(g, rec, p=7).value == F(3, 14)
    with pytest.raises(PreconditionError):
        make_R_certificate(g, rec, p=3)
    with pytest.raises(PreconditionError):
        make_R_certificate(g, rec, p=9)
    gp, us, vs, g2, _ = r_pipeline_inputs()["barS3plus"]
    g, rec = build_R_graph(gp, us, vs, g2)
    assert rec.deleted and rec.u_vertices.count(None) == 1
    assert make_R_certificate(g, rec).value == F(5, 4)


def test_build_R_rejects_non_members():
    c8 = build_named("Cn", [8])
    with pytest.raises(PreconditionError):
        build_R_graph(c8, [0, 2, 4, 6], [1, 3, 5, 7], build_named("Kn", [4]))
    c6 = build_named("Cn", [6])
    with pytest.raises(PreconditionError):
        build_R_graph(c6, [0, 2, 4], [1, 3, 5], Graph.empty(3))


def test_record_mismatch_rejected():
    gp, us, vs, g2, _ = r_pipeline_inputs()["S_3"]
    g, rec = build_R_graph(gp, us, vs, g2)
    flipped = tuple(tuple(1 - x for x in r) for r in rec.m_rows)
    with pytest.raises(PreconditionError):
        make_R_certificate(g, replace(rec, m_rows=flipped))
    with pytest.raises(PreconditionError):
        make_R_certificate(g, replace(rec, u_vertices=rec.v_vertices, v_vertices=rec.u_vertices))
    with pytest.raises(PreconditionError):
        make_R_certificate(g, replace(rec, deleted=True))


def test_integral_dual_against_bruteforce(rng):
    for _ in range(25):
        g = random_graph(rng, rng.randint(1, 5))
        u = [F(rng.randint(0, 4), rng.randint(1, 3)) for _ in range(g.n)]
        w = [rng.randint(0, 2) for _ in range(g.n)]
        val, wit = integral_dual_optimum(g, u, w)
        assert val == _dual_brute(g, u, w)
        cov = [sum(y for y, r in zip(wit["y"], wit["rows"]) if v in r) for v in range(g.n)]
        assert all(c + z >= x for c, z, x in zip(cov, wit["z"], w))
        assert sum(wit["y"]) + sum(F(a) * b for a, b in zip(u, wit["z"])) == val


def test_integral_dual_examples():
    s3 = build_named("S_n", [3])
    assert integral_dual_optimum(s3, [1] * 6, [0, 1, 0, 1, 0, 1])[0] == 1
    assert integral_dual_optimum(s3, [0] * 6, [2] * 6)[0] == 0
    with pytest.raises(PreconditionError):
        integral_dual_optimum(s3, [1] * 6, [F(1, 2)] * 6)
    with pytest.raises(PreconditionError):
        integral_dual_optimum(s3, [-1] * 6, [1] * 6)


def _check_hit(g, hit):
    w2 = [2 * a for a in hit.w]
    lhs = integral_dual_optimum(g, hit.u, w2)[0]
    rhs = 2 * integral_dual_optimum(g, hit.u, hit.w)[0]
    assert (lhs, rhs) == (hit.lhs, hit.rhs) and lhs < rhs


@pytest.mark.parametrize("name,params", [("S_n", [3]), ("C10C5e_H", []), ("barS3plus", [])])
def test_falsifier_finds_violations(name, params):
    g = build_named(name, params)
    hit = box_tdi_falsify_search(g)
    assert hit is not None
    _check_hit(g, hit)


@pytest.mark.parametrize("name,params", [("Kn", [1]), ("Cn", [4]), ("Kn", [4]), ("Pn", [4])])
def test_falsifier_silent_on_box_perfect(name, params):
    assert box_tdi_falsify_search(build_named(name, params)) is None


def test_falsifier_budget():
    with pytest.raises(BudgetExceeded):
        box_tdi_falsify_search(build_named("Cn", [6]), budgets=Budgets(falsify_max_evals=10))


def test_falsifier_denominators_matter():
    g = build_named("S_n", [5])
    hit = box_tdi_falsify_search(g)
    assert hit is not None and any(a.denominator == 3 for a in hit.u)
    _check_hit(g, hit)
