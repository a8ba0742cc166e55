"""The acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. Every tolerance is pinned here: exact rational equality unless a
criterion explicitly allows a float band.
"""

import json
import random
from fractions import Fraction

from causalspaces.cli import main as cli_main
from causalspaces.document import (
    document_violations,
    dumps_document,
    load_document,
    parse_document,
    to_causal_space,
)
from causalspaces.effects import (
    ACTIVE,
    DORMANT,
    NO_EFFECT,
    active_effect,
    check_lemma1,
    check_prop2,
    check_prop3,
    classify,
    conditional_active_effect_event,
    has_causal_effect,
    run_query,
)
from causalspaces.generators import GenConfig, gen_dormant_space, gen_null_effect_space, gen_random_space, gen_screened_space
from causalspaces.kernels import (
    CausalSpace,
    InterventionSpec,
    intervene,
    marginalize,
    subsets_in_order,
    validate,
)
from causalspaces.measure import Measure, RandomVariable, delta
from causalspaces.oracle import oracle_effect_brute
from causalspaces.scores import F1, F2, MEAN_AND_VARIANCE_DIFF, ate, mean_effect_score_event, mean_effect_score_algebra
from causalspaces.space import Coordinate, ProductSpace, coordinate_subalgebra

from sweeps import random_effect_query, random_space_stream

F = Fraction
INS = frozenset({"ins"})


def ok(number: int, message: str) -> None:
    print(f"ACCEPTANCE {number:2d} PASS: {message}")


def sinh_series(x: float) -> float:
    total, term = 0.0, x
    for k in range(12):
        total += term
        term *= x * x / ((2 * k + 2) * (2 * k + 3))
    return total


def _unions(blocks):
    out = [frozenset()]
    for block in blocks:
        out += [u | block for u in out]
    return out


def _random_measure(rng, space):
    raw = [0 if rng.random() < 0.25 else rng.randint(1, 12) for _ in space.outcomes]
    if not any(raw):
        raw[0] = 1
    total = sum(raw)
    return Measure(space, {o: F(w, total) for o, w in zip(space.outcomes, raw) if w})


def test_criterion_1_fixture_fidelity(insurance):
    sp = insurance.space
    p = insurance.observational
    assert p(sp.where(pay="1000")) == F(1, 160) == F("0.00625")
    assert p(sp.where(pay="30")) == F("0.51")
    assert p(sp.where(pay="0")) == F("0.48375")
    ok(1, "insurance document reproduces the observational table exactly")


def test_criterion_2_active_effects(insurance):
    sp = insurance.space
    a = sp.where(pay="1000")
    kernel = insurance.kernel(INS)
    assert kernel.value(("Y",), a) == 0 and insurance.observational(a) == F("0.00625")
    assert kernel.value(("N",), a) == F("0.015")
    assert active_effect(insurance, INS, ("N", "Y", "0"), a)
    assert active_effect(insurance, INS, ("N", "N", "0"), a)
    ok(2, "both insurance rows have active effects on the 1000-payment event (0 and 0.015 vs 0.00625)")


def test_criterion_3_conditional_effects(insurance):
    sp = insurance.space
    a = sp.where(pay="1000")
    omega = ("N", "Y", "0")
    g, h = sp.where(dan="N"), sp.where(dan="H")
    kernel = insurance.kernel(INS)
    assert kernel.value(("Y",), g & a) == 0 and insurance.observational(g & a) == 0
    assert conditional_active_effect_event(insurance, INS, omega, a, g) is NO_EFFECT
    assert insurance.observational(h & a) / insurance.observational(h) == F("0.00625")
    assert kernel.value(("Y",), h & a) == 0
    assert conditional_active_effect_event(insurance, INS, omega, a, h) is ACTIVE
    ok(3, "conditioning on no danger removes the effect (0 = 0); on high danger it stays (0 vs 0.00625)")


def test_criterion_4_mean_effect_scores(insurance):
    sp = insurance.space
    a = sp.where(pay="1000")
    q_y = InterventionSpec.point(sp, {"ins": "Y"}).q
    q_n = InterventionSpec.point(sp, {"ins": "N"}).q
    assert mean_effect_score_event(insurance, INS, q_y, a, F1).value == F("-0.00625")
    assert mean_effect_score_event(insurance, INS, q_n, a, F1).value == F("0.00875")
    scale = lambda x: sinh_series(x - 0.5) / (2 * sinh_series(0.5))  # independent oracle
    s_y = mean_effect_score_event(insurance, INS, q_y, a, F2).value
    s_n = mean_effect_score_event(insurance, INS, q_n, a, F2).value
    assert abs(s_y - (scale(0.0) - scale(0.00625))) < 1e-12
    assert abs(s_n - (scale(0.015) - scale(0.00625))) < 1e-12
    assert abs(s_y - (-0.00675)) < 5e-5
    assert abs(s_n - 0.00942) < 5e-5
    ok(4, "linear scores are -0.00625/+0.00875 exactly; sinh scores match the series oracle and the rounded values")


def test_criterion_5_composite_score(insurance, insurance_doc):
    q_y = InterventionSpec.point(insurance.space, {"ins": "Y"}).q
    score = mean_effect_score_algebra(
        insurance, INS, q_y, insurance_doc.partitions["by_pay"], MEAN_AND_VARIANCE_DIFF, insurance_doc.variables["payment"]
    )
    assert score.value == (F("8.45"), F("-6244.5975"))
    ok(5, "buying insurance scores (8.45, -6244.5975) on the payment algebra, exactly")


def test_criterion_6_sequential_identity_and_ate(insurance):
    do_y = InterventionSpec.point(insurance.space, {"ins": "Y"})
    do_n = InterventionSpec.point(insurance.space, {"ins": "N"})
    assert intervene(intervene(insurance, do_y), do_n).observational == intervene(insurance, do_n).observational
    assert intervene(intervene(insurance, do_n), do_y).observational == intervene(insurance, do_y).observational
    for seed in range(200):
        cs = gen_random_space(GenConfig(seed=1_000 + seed))
        ids = sorted(cs.space.ids)
        target = frozenset(ids[: 1 + seed % len(ids)])
        sub = cs.space.subspace(target)
        first, second = sub.outcomes[0], sub.outcomes[-1]
        do_a = InterventionSpec(target, delta(sub, first))
        do_b = InterventionSpec(target, delta(sub, second))
        assert intervene(intervene(cs, do_a), do_b).observational == intervene(cs, do_b).observational

    w = Coordinate("w", ("0", "1"), (F(0), F(1)))
    y = Coordinate("y", ("0", "1"), (F(0), F(1)))
    sp = ProductSpace((w, y))
    rows = {}
    for label in "01":
        p1 = F(1, 4) + F(1, 2) * int(label)
        rows[(label,)] = {(label, "0"): 1 - p1, (label, "1"): p1}
    from causalspaces.kernels import CausalKernel

    toy = CausalSpace(
        sp,
        Measure(sp, {("0", "0"): F(3, 8), ("0", "1"): F(1, 8), ("1", "0"): F(1, 8), ("1", "1"): F(3, 8)}),
        {frozenset({"w"}): CausalKernel(sp, frozenset({"w"}), rows)},
    )
    assert ate(toy, "w", RandomVariable.from_coordinate(sp, "y")) == F(1, 2)
    ok(6, "sequential same-target interventions collapse on the insurance space and 200 seeded spaces; toy ATE is 1/2")


def test_criterion_7_lemma1_suite():
    rng = random.Random(7)
    checked = 0
    for seed in range(500):
        u = {"c0"} if seed % 2 == 0 else {"c1"}
        ns = gen_null_effect_space(GenConfig(seed=2_000 + seed), u)
        rest = set(ns.space.ids) - u
        q = _random_measure(rng, ns.space.subspace(u))
        algebra = coordinate_subalgebra(ns.space, rest)
        for a in _unions(algebra.blocks):
            assert check_lemma1(ns, u, a, q)
            checked += 1
    ok(7, f"independence under intervention holds on all {checked} premise events across 500 null-effect spaces")


def test_criterion_8_prop2_suite():
    rng = random.Random(8)
    event_cases = partition_cases = 0
    seed = 0
    while event_cases < 100 or partition_cases < 100:
        u = {"c0"} if seed % 2 == 0 else {"c1"}
        ns = gen_null_effect_space(GenConfig(seed=3_000 + seed), u)
        seed += 1
        rest = set(ns.space.ids) - u
        algebra = coordinate_subalgebra(ns.space, rest)
        unions = [e for e in _unions(algebra.blocks) if e]
        positive = [e for e in unions if ns.observational(e) > 0]
        if not positive:
            continue
        q = _random_measure(rng, ns.space.subspace(u))
        if event_cases < 100:
            a = unions[rng.randrange(len(unions))]
            g = positive[rng.randrange(len(positive))]
            assert check_prop2(ns, u, a, g, q)
            event_cases += 1
        if partition_cases < 100:
            a = unions[rng.randrange(len(unions))]
            sub_rest = {sorted(rest)[rng.randrange(len(rest))]} if rest else rest
            assert check_prop2(ns, u, a, coordinate_subalgebra(ns.space, sub_rest), q)
            partition_cases += 1
    ok(8, f"conditional independence conclusion held on {event_cases} event and {partition_cases} algebra cases")


def test_criterion_9_prop3_suite():
    rng = random.Random(9)
    cases = 0
    spaces = [gen_dormant_space()] + [gen_screened_space(GenConfig(seed=4_000 + s)) for s in range(40)]
    for cs in spaces:
        sub_v = cs.space.subspace({"c2"})
        sub_u = cs.space.subspace({"c1"})
        h2 = coordinate_subalgebra(cs.space, {"c2"})
        for a in _unions(h2.blocks):
            for omega in cs.space.outcomes:
                q_v = _random_measure(rng, sub_v)
                q_u = _random_measure(rng, sub_u)
                assert check_prop3(cs, {"c1"}, {"c2"}, omega, a, q_on_v=q_v, q_on_u=q_u)
                cases += 1
                if cases >= 200:
                    break
            if cases >= 200:
                break
        if cases >= 200:
            break
    assert cases >= 200
    ok(9, f"both post-intervention conclusions held on {cases} premise-satisfying cases")


def test_criterion_10_dormant_and_differential(copy_space):
    diag = copy_space.space.event([("0", "0"), ("1", "1")])
    assert classify(copy_space, {"c1"}, ("0", "1"), diag) is DORMANT
    rng = random.Random(10)
    for trial in range(1000):
        cs = random_space_stream(rng, trial)
        query = random_effect_query(rng, cs)
        assert run_query(cs, query) == oracle_effect_brute(cs, query), (trial, query)
    ok(10, "copy space classifies dormant; 1000 differential queries agree with the brute-force oracle")


def test_criterion_11_marginalization_suite():
    rng = random.Random(11)
    verdicts = implications = spaces = 0
    seed = 0
    while spaces < 200:
        cs = gen_random_space(GenConfig(seed=5_000 + seed, max_labels=2))
        seed += 1
        if len(cs.space.ids) < 3:
            continue
        spaces += 1
        ids = sorted(cs.space.ids)
        keep = set(rng.sample(ids, 2))
        small = marginalize(cs, keep)
        rest = [c for c in ids if c not in keep]
        small_events = _unions(coordinate_subalgebra(small.space, keep).blocks)

        def lift(a):
            return frozenset(o for o in cs.space.outcomes if cs.space.restrict(o, keep) in {tuple(x) for x in a})

        for u in subsets_in_order(small.space.ids):
            if not u:
                continue
            kernel_small = small.kernel(u)
            kernel_large = cs.kernel(u)
            for a in small_events:
                big_a = lift(a)
                pa_small, pa_large = small.observational(a), cs.observational(big_a)
                for key in small.space.subspace(u).outcomes:
                    active_small = kernel_small.value(key, a) != pa_small
                    active_large = kernel_large.value(key, big_a) != pa_large
                    assert active_small == active_large
                    verdicts += 1
        u = frozenset(rng.sample(sorted(keep), 1))
        for key_omega in small.space.outcomes:
            omega_large = next(o for o in cs.space.outcomes if cs.space.restrict(o, keep) == key_omega)
            for a in small_events:
                eff_small = has_causal_effect(small, u, key_omega, a)
                eff_large = has_causal_effect(cs, u, omega_large, lift(a))
                if eff_small:
                    assert eff_large  # (ii)(a)
                if not eff_large:
                    assert not eff_small  # (ii)(b)
                implications += 1
    assert spaces == 200
    ok(11, f"{spaces} three-coordinate spaces: {verdicts} active-verdict agreements, {implications} implication checks, none violated")


def test_criterion_12_axiom_enforcement():
    import contextlib
    import io
    import pathlib
    import tempfile

    rng = random.Random(12)
    base = json.loads(dumps_document(load_document(pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "insurance.json")))
    mutated = 0
    with tempfile.TemporaryDirectory() as tmp:
        for case in range(100):
            data = json.loads(json.dumps(base))
            kind = case % 4
            if kind == 0:  # kernel row-sum tampering
                row = rng.choice(["Y", "N"])
                cell = rng.choice(sorted(data["kernels"]["ins"][row]))
                data["kernels"]["ins"][row][cell] = str(F(data["kernels"]["ins"][row][cell]) * F(9, 10))
            elif kind == 1:  # support tampering: move mass outside the row's cylinder
                row = "Y" if rng.random() < 0.5 else "N"
                other = "N" if row == "Y" else "Y"
                cell = rng.choice(sorted(data["kernels"]["ins"][row]))
                weight = F(data["kernels"]["ins"][row][cell])
                parts = cell.split(",")
                parts[1] = other
                data["kernels"]["ins"][row][cell] = str(weight / 2)
                data["kernels"]["ins"][row][",".join(parts)] = str(weight / 2)
            elif kind == 2:  # explicit empty-subset kernel conflicting with the measure
                tampered = dict(data["measure"])
                cells = sorted(tampered)
                a_cell, b_cell = rng.sample(cells, 2)
                shift = min(F(tampered[a_cell]), F(1, 1000))
                tampered[a_cell] = str(F(tampered[a_cell]) - shift)
                tampered[b_cell] = str(F(tampered[b_cell]) + shift)
                data["kernels"][""] = {"": tampered}
            else:  # observational row-sum tampering
                cell = rng.choice(sorted(data["measure"]))
                data["measure"][cell] = str(F(data["measure"][cell]) + F(1, rng.randint(50, 500)))
            doc = parse_document(data)
            violations = document_violations(doc)
            if not violations:
                violations = validate(to_causal_space(doc))
            assert violations, f"mutation case {case} produced no violation"
            path = pathlib.Path(tmp) / f"mut{case}.json"
            path.write_text(json.dumps(data))
            with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
                exit_code = cli_main(["validate", str(path)])
            assert exit_code == 1
            mutated += 1
    assert mutated == 100
    ok(12, "all 100 mutated fixtures produced at least one violation and validate exited 1")
