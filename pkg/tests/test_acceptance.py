"""Acceptance gate: end-to-end criteria with explicit time budgets.

Every check is exact (Fraction arithmetic, equality, zero tolerance); the only
numeric budgets are wall-clock limits.  Each test prints one pass line with
its timing when it succeeds.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction

from helpers import (
    brute_force_isometries,
    brute_force_partial_isometries,
    random_admissible_vector,
    random_space,
    random_toeplitz,
    random_toeplitz_admissible,
)
from urysohn import (
    DegenerateVector,
    FiniteMetricSpace,
    ToeplitzMetric,
    billiard_chain,
    build_rational_urysohn,
    build_toeplitz_universal,
    check_admissible,
    compose_perms,
    docio,
    enumerate_admissible,
    hall_stage,
    isometry_group,
    key_inequality_check,
    ladder_bound,
    orbit_extension,
    partial_isometries,
    phi_of,
    realize,
    universality_audit,
    validate_metric,
    verify_certificate,
)
from urysohn.globalization import globalize


def _finish(name: str, started: float, budget: float):
    elapsed = time.monotonic() - started
    assert elapsed < budget, f"{name} took {elapsed:.1f}s, budget {budget}s"
    print(f"PASS {name} ({elapsed:.2f}s < {budget}s)")


def test_criterion_1_realize_enumerate_round_trip():
    started = time.monotonic()
    rng = random.Random(1001)
    for _ in range(1000):
        space = random_space(rng, max_points=6, max_den=4)
        vectors = enumerate_admissible(space, rng.randint(1, 2), rng.randint(1, 2))
        for vec in vectors[:5]:
            ext = realize(space, vec)
            assert validate_metric(ext.dist).valid
        if vectors and space.n >= 1:
            vec = list(vectors[0])
            vec[0] = Fraction(-1)  # break positivity
            assert not check_admissible(space, vec)[0]
            if space.n >= 2:
                vec = list(vectors[0])
                vec[0] += Fraction(50)  # break the Lipschitz bound
                assert not check_admissible(space, vec)[0]
            if space.n >= 2 and space.dist[0][1] > Fraction(2, 1000):
                vec = list(vectors[0])
                vec[0] = vec[1] = Fraction(1, 1000)  # break the sum bound
                assert not check_admissible(space, vec)[0]
    _finish("criterion 1: enumerated vectors realize to valid metrics", started, 10)


def test_criterion_2_isometry_groups_match_brute_force():
    started = time.monotonic()
    two = FiniteMetricSpace.from_matrix([[0, 1], [1, 0]])
    equilateral = FiniteMetricSpace.from_matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert len(partial_isometries(two)) == 7
    assert len(partial_isometries(equilateral)) == 34

    rng = random.Random(1002)
    for _ in range(60):
        space = random_space(rng, max_points=6, max_den=4)
        group = isometry_group(space)
        assert sorted(group.elements) == brute_force_isometries(space)
        if space.n <= 5:
            listed = sorted(p.mapping for p in partial_isometries(space))
            assert listed == brute_force_partial_isometries(space)
    _finish("criterion 2: groups and partial-isometry counts match brute force",
            started, 30)


def test_criterion_3_orbit_extensions_are_equivariant():
    started = time.monotonic()
    rng = random.Random(1003)
    checked = 0
    while checked < 200:
        space = random_space(rng, max_points=5, max_den=4)
        vec = random_admissible_vector(rng, space)
        if vec is None:
            continue
        group = isometry_group(space)
        try:
            ext = orbit_extension(space, group, vec)
        except DegenerateVector:
            continue
        checked += 1
        assert validate_metric(ext.extension.dist).valid
        assert ext.extension.profile(space.n, range(space.n)) == tuple(vec)
        for g in group.elements:
            assert key_inequality_check(space, vec, g)[0]
        # The extended action realizes the same composition table.
        n = space.n
        by_base = {}
        for ge in ext.extended_action.elements:
            base = tuple(ge[:n])
            assert base not in by_base
            by_base[base] = ge
        assert set(by_base) == set(group.elements)
        for g in group.elements:
            for h in group.elements:
                assert (
                    by_base[compose_perms(g, h)]
                    == compose_perms(by_base[g], by_base[h])
                )
    _finish("criterion 3: orbit extensions realize the seed and the group",
            started, 60)


def test_criterion_4_staged_builds_pass_every_audit():
    started = time.monotonic()
    stages = ((1, 2, 3), (2, 2, 3), (3, 2, 3))
    runs = [("deterministic", 0)] + [("random", seed) for seed in range(1, 11)]
    for mode, seed in runs:
        result = build_rational_urysohn(stages, mode=mode, seed=seed)
        assert result.complete
        space = result.space
        assert validate_metric(space.dist).valid
        for n, D, B in stages:
            audit = universality_audit(space, n, D, B, space.n)
            assert audit.passed, audit.render()
    _finish("criterion 4: builds through (3,2,3) audit cleanly on 11 runs",
            started, 300)


def test_criterion_5_billiard_chains():
    started = time.monotonic()
    # The order-2 worked instance: a four-column chain, exactly.
    tm = ToeplitzMetric((Fraction(1),))
    chain = billiard_chain(tm, (Fraction(2), Fraction(3, 2)),
                           (Fraction(3, 5), Fraction(1, 2)))
    assert chain.vectors == (
        (Fraction(2), Fraction(3, 2)),
        (Fraction(3, 2), Fraction(2)),
        (Fraction(1, 2), Fraction(3, 2)),
        (Fraction(3, 5), Fraction(1, 2)),
    )

    rng = random.Random(1005)
    for _ in range(500):
        tm = random_toeplitz(rng, max_order=4, max_den=4)
        x = random_toeplitz_admissible(rng, tm)
        y = random_toeplitz_admissible(rng, tm)
        chain = billiard_chain(tm, x, y)
        assert chain.verify()  # valid links and exact shift
        assert chain.vectors[0] == x and chain.vectors[-1] == y
        assert len(chain.vectors) <= ladder_bound(tm, x, y)
    _finish("criterion 5: 500 random chains link, shift, and stay bounded",
            started, 60)


def test_criterion_6_toeplitz_build_through_2_1_2():
    started = time.monotonic()
    stages = ((1, 1, 2), (2, 1, 2))
    result = build_toeplitz_universal(stages)
    assert result.complete
    tm = result.metric
    space = tm.induced_space()
    assert phi_of(space).ok  # exactly Toeplitz
    assert validate_metric(space.dist).valid
    assert tm.is_subadditive()
    for n, D, B in stages:
        audit = universality_audit(space, n, D, B, space.n)
        assert audit.passed, audit.render()
    _finish("criterion 6: Toeplitz build is Toeplitz, metric, subadditive, "
            "and universal", started, 120)


def test_criterion_7_globalization_catalog():
    started = time.monotonic()
    catalog = [
        FiniteMetricSpace.from_matrix([[0]]),
        FiniteMetricSpace.from_matrix([[0, 1], [1, 0]]),
    ]
    for a in (1, 2):
        for b in (1, 2):
            for c in (1, 2):
                catalog.append(
                    FiniteMetricSpace.from_matrix([[0, a, b], [a, 0, c], [b, c, 0]])
                )
    for space in catalog:
        cert = globalize(space, budget=12)  # raises BudgetExceeded on overrun
        assert cert.added_points <= 12
        report = verify_certificate(cert)  # includes ISO(K)-homomorphism checks
        assert report.valid, report.render()
    _finish("criterion 7: the whole catalog globalizes within 12 added points",
            started, 600)


def test_criterion_8_hall_stages_are_injective_homomorphisms():
    started = time.monotonic()
    for n in (3, 4):
        stage = hall_stage(n)
        assert stage.verify_homomorphism()  # exhaustive: (n!)^2 products
    _finish("criterion 8: Hall stages 3 and 4 verify exhaustively", started, 5)


def _cli(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "urysohn.cli", *args],
        capture_output=True,
        cwd=cwd,
    )
    return proc.returncode, proc.stdout


def test_criterion_9_cli_is_byte_deterministic(tmp_path):
    started = time.monotonic()
    square = {
        "format": "metric-matrix/1",
        "points": ["a", "b", "c"],
        "matrix": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]],
    }
    space_path = tmp_path / "space.json"
    space_path.write_text(docio.dumps(square), encoding="utf-8")

    toeplitz_doc = docio.space_to_document(
        ToeplitzMetric((Fraction(1),)).induced_space(2)
    )
    toeplitz_path = tmp_path / "toeplitz.json"
    toeplitz_path.write_text(docio.dumps(toeplitz_doc), encoding="utf-8")

    cert_path = tmp_path / "cert.json"
    code, _ = _cli(
        ["globalize", str(space_path), "--budget", "12", "--out", str(cert_path)],
        tmp_path,
    )
    assert code == 0

    commands = [
        ["validate", str(space_path)],
        ["isogroup", str(space_path)],
        ["pisocount", str(space_path)],
        ["extend", str(space_path), "--vector", "1,1,1"],
        ["orbit-extend", str(space_path), "--vector", "1,2,3"],
        ["build", "--stages", "1,2,2;2,2,2", "--mode", "random", "--seed", "7"],
        ["audit", str(space_path), "--n", "1", "--den", "1", "--bound", "2"],
        ["toeplitz", "--stages", "1,1,2;2,1,2", "--mode", "random", "--seed", "7"],
        ["billiard", str(toeplitz_path), "--from", "2,3/2", "--to", "3/5,1/2"],
        ["globalize", str(space_path), "--budget", "12"],
        ["verify-cert", str(cert_path)],
        ["hall", "--n", "3", "--element", "1,0,2"],
    ]
    for args in commands:
        first = _cli(args, tmp_path)
        second = _cli(args, tmp_path)
        assert first == second, f"non-deterministic output for {args}"
        assert first[0] == 0, f"unexpected exit {first[0]} for {args}"
    _finish("criterion 9: all 12 CLI commands are byte-identical on rerun",
            started, 30)
