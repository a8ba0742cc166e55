"""Binary causal-effect verdicts over finite causal spaces.

Implements the active-effect check, the full no/active/dormant trichotomy,
their conditional variants (given an event or a sigma-algebra) and the
post-intervention variant, plus executable forms of the independence
results that link "no active effect" to independence under intervention.

Every comparison is exact rational equality; this module has no tolerance
parameter. All functions are pure; the quantifier loops run in a fixed
canonical order so results are deterministic.

A subject may be a single outcome (tuple) or a nonempty event (frozenset);
verdicts depend on an outcome only through its projection onto the
intervened coordinates, so event subjects are deduplicated by that
projection. Event-subject verdicts aggregate per-outcome verdicts with
priority Active > Undetermined > Dormant > NoEffect.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .errors import (
    BlockCountExceededError,
    EmptySubjectError,
    KernelMissingError,
    PremiseNotMetError,
)
from .kernels import CausalKernel, CausalSpace, InterventionSpec, intervention_measure, intervene, subsets_in_order
from .measure import Measure, cond_independent, independent
from .space import Event, Outcome, Partition, coordinate_subalgebra

DEFAULT_BLOCK_CAP = 16

Subject = Union[Outcome, Event]
Target = Union[Event, Partition]


class EffectTag(enum.Enum):
    NO_EFFECT = "no-effect"
    ACTIVE = "active"
    DORMANT = "dormant"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Reason:
    """Why a verdict is undetermined."""

    kind: str  # "zero-measure-conditioning" | "not-mutually-abs-continuous" | "kernel-missing"
    coords: Optional[frozenset] = None

    def __str__(self) -> str:
        if self.coords is not None:
            return f"{self.kind} {{{', '.join(sorted(self.coords))}}}"
        return self.kind


ZERO_MEASURE_CONDITIONING = Reason("zero-measure-conditioning")
NOT_MUTUALLY_ABS_CONT = Reason("not-mutually-abs-continuous")


def kernel_missing_reason(coords: Iterable[str]) -> Reason:
    return Reason("kernel-missing", frozenset(coords))


@dataclass(frozen=True)
class EffectVerdict:
    """Outcome of an effect query: a tag plus a reason when undetermined."""

    tag: EffectTag
    reason: Optional[Reason] = None

    def __post_init__(self):
        if (self.tag is EffectTag.UNDETERMINED) != (self.reason is not None):
            raise ValueError("exactly the undetermined verdicts carry a reason")

    @property
    def determined(self) -> bool:
        return self.tag is not EffectTag.UNDETERMINED

    def __str__(self) -> str:
        return f"{self.tag.value} ({self.reason})" if self.reason else self.tag.value


NO_EFFECT = EffectVerdict(EffectTag.NO_EFFECT)
ACTIVE = EffectVerdict(EffectTag.ACTIVE)
DORMANT = EffectVerdict(EffectTag.DORMANT)


def undetermined(reason: Reason) -> EffectVerdict:
    return EffectVerdict(EffectTag.UNDETERMINED, reason)


# ---------------------------------------------------------------------------
# shared plumbing


def _subject_keys(cs: CausalSpace, coords: frozenset, subject: Subject) -> list[Outcome]:
    """Distinct projections of the subject onto `coords`, in canonical order."""
    space = cs.space
    if isinstance(subject, tuple):
        return [space.restrict(space.check_outcome(subject), coords)]
    members = frozenset(subject)
    if not members:
        raise EmptySubjectError("the subject event is empty")
    keys = {space.restrict(space.check_outcome(o), coords) for o in members}
    order = {k: i for i, k in enumerate(space.subspace(coords).outcomes)}
    return sorted(keys, key=order.__getitem__)


def _merge_key(space, coords: frozenset, assignment: dict) -> Outcome:
    return tuple(assignment[cid] for cid in space.ordered(coords))


def algebra_events(partition: Partition, block_cap: Optional[int] = None) -> Iterator[Event]:
    """Every union of the partition's blocks (the whole sigma-algebra).

    Refuses partitions above the block cap instead of sampling.
    """
    cap = DEFAULT_BLOCK_CAP if block_cap is None else block_cap
    n = len(partition.blocks)
    if n > cap:
        raise BlockCountExceededError(n, cap)
    for mask in range(1 << n):
        out: frozenset = frozenset()
        for i in range(n):
            if mask >> i & 1:
                out |= partition.blocks[i]
        yield out


def _targets(cs: CausalSpace, target: Target, block_cap: Optional[int]) -> list[Event]:
    if isinstance(target, Partition):
        if target.space != cs.space:
            raise ValueError("target partition lives on a different space")
        return list(algebra_events(target, block_cap))
    return [frozenset(target)]


def _require_all_kernels(cs: CausalSpace) -> None:
    for s in subsets_in_order(cs.space.ids):
        if not cs.has_kernel(s):
            raise KernelMissingError(s)


# ---------------------------------------------------------------------------
# active effects (marginal comparison against the observational measure)


def active_effect(cs: CausalSpace, coords: Iterable[str], omega: Outcome, a: Event) -> bool:
    """Whether the kernel row selected by `omega` moves the probability of `a`."""
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    key = cs.space.restrict(cs.space.check_outcome(omega), coords)
    return kernel.value(key, a) != cs.observational(a)


def active_effect_event(cs: CausalSpace, coords: Iterable[str], b: Event, a: Event) -> bool:
    """Whether some outcome of the nonempty event `b` has an active effect on `a`."""
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    pa = cs.observational(a)
    return any(kernel.value(key, a) != pa for key in _subject_keys(cs, coords, frozenset(b)))


def active_effect_on_algebra(
    cs: CausalSpace,
    coords: Iterable[str],
    subject: Subject,
    algebra: Partition,
    block_cap: Optional[int] = None,
) -> bool:
    """Whether the subject has an active effect on some event of the algebra.

    Scans every union of the partition's blocks (capped), not just the blocks.
    """
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    keys = _subject_keys(cs, coords, subject)
    p = cs.observational
    for a in algebra_events(algebra, block_cap):
        pa = p(a)
        if any(kernel.value(key, a) != pa for key in keys):
            return True
    return False


# ---------------------------------------------------------------------------
# the unconditional trichotomy


def _effect_pairs(cs: CausalSpace, coords: frozenset, key: Outcome) -> list[tuple[CausalKernel, Outcome, CausalKernel, Outcome]]:
    """Row pairs whose disagreement on a target event constitutes a causal effect.

    One pair per intervention subset S and per assignment of the S-minus-U
    coordinates: the S-kernel row spliced from `key`, against the row of the
    kernel on S minus U.
    """
    space = cs.space
    on_u = dict(zip(space.ordered(coords), key))
    pairs = []
    for s in subsets_in_order(space.ids):
        k_joint = cs.kernel(s)
        rest = s - coords
        k_rest = cs.kernel(rest)
        for part in space.subspace(rest).outcomes:
            cell = {**on_u, **dict(zip(space.ordered(rest), part))}
            row = _merge_key(space, s, cell)
            pairs.append((k_joint, row, k_rest, part))
    return pairs


def has_causal_effect(cs: CausalSpace, coords: Iterable[str], omega: Outcome, a: Event) -> bool:
    """The strong notion: some joint intervention is changed by also fixing `coords`.

    Quantifies over every subset S and every assignment of the S-minus-U
    coordinates; requires the full kernel family.
    """
    coords = cs.space.check_subset(coords)
    _require_all_kernels(cs)
    key = cs.space.restrict(cs.space.check_outcome(omega), coords)
    a = frozenset(a)
    return any(kj.value(r1, a) != kr.value(r2, a) for kj, r1, kr, r2 in _effect_pairs(cs, coords, key))


def classify(
    cs: CausalSpace,
    coords: Iterable[str],
    subject: Subject,
    target: Target,
    block_cap: Optional[int] = None,
) -> EffectVerdict:
    """No/active/dormant verdict for a subject on an event or sigma-algebra.

    Active needs only the kernel on `coords`, so a positive verdict comes
    back even on a partial family; separating no-effect from dormant
    quantifies over every subset and raises on the first missing kernel.
    """
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    keys = _subject_keys(cs, coords, subject)
    targets = _targets(cs, target, block_cap)
    p = cs.observational
    for a in targets:
        pa = p(a)
        if any(kernel.value(key, a) != pa for key in keys):
            return ACTIVE
    _require_all_kernels(cs)
    for key in keys:
        pairs = _effect_pairs(cs, coords, key)
        for a in targets:
            if any(kj.value(r1, a) != kr.value(r2, a) for kj, r1, kr, r2 in pairs):
                return DORMANT
    return NO_EFFECT


# ---------------------------------------------------------------------------
# conditional variants, given an event


def conditional_active_effect_event(
    cs: CausalSpace,
    coords: Iterable[str],
    subject: Subject,
    a: Event,
    g: Event,
) -> EffectVerdict:
    """Active-effect verdict with both measures conditioned on the event `g`.

    Undetermined unless `g` has positive probability observationally and
    under each subject row; event subjects aggregate per-outcome verdicts.
    """
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    p = cs.observational
    a, g = frozenset(a), frozenset(g)
    pg, pga = p(g), p(g & a)
    saw_undetermined = False
    for key in _subject_keys(cs, coords, subject):
        kg = kernel.value(key, g)
        if pg == 0 or kg == 0:
            saw_undetermined = True
            continue
        if kernel.value(key, g & a) / kg != pga / pg:
            return ACTIVE
    if saw_undetermined:
        return undetermined(ZERO_MEASURE_CONDITIONING)
    return NO_EFFECT


def conditional_classify_event(
    cs: CausalSpace,
    coords: Iterable[str],
    subject: Subject,
    target: Target,
    g: Event,
    block_cap: Optional[int] = None,
) -> EffectVerdict:
    """Trichotomy verdict conditioned on an event.

    Active and the S=U positivity premise need only the kernel on `coords`;
    the full quantified no-effect check runs (and may raise on a missing
    kernel) only when neither settles the verdict.
    """
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    p = cs.observational
    g = frozenset(g)
    targets = [frozenset(t) for t in _targets(cs, target, block_cap)]
    pg = p(g)
    keys = _subject_keys(cs, coords, subject)
    saw_undetermined = saw_dormant = False
    for key in keys:
        kg = kernel.value(key, g)
        if pg == 0 or kg == 0:
            saw_undetermined = True
            continue
        for a in targets:
            if kernel.value(key, g & a) * pg != p(g & a) * kg:
                return ACTIVE
    if saw_undetermined:
        return undetermined(ZERO_MEASURE_CONDITIONING)
    _require_all_kernels(cs)
    for key in keys:
        rows = _effect_pairs(cs, coords, key)
        if not all(kj.value(r1, g) > 0 and kr.value(r2, g) > 0 for kj, r1, kr, r2 in rows):
            saw_undetermined = True
            continue
        for a in targets:
            ga = g & a
            if any(kj.value(r1, ga) * kr.value(r2, g) != kr.value(r2, ga) * kj.value(r1, g) for kj, r1, kr, r2 in rows):
                saw_dormant = True
                break
    if saw_undetermined:
        return undetermined(ZERO_MEASURE_CONDITIONING)
    return DORMANT if saw_dormant else NO_EFFECT


# ---------------------------------------------------------------------------
# conditional variants, given a sigma-algebra


def _mac_on(m1_val, m2_val, algebra: Partition) -> bool:
    return all((m1_val(b) == 0) == (m2_val(b) == 0) for b in algebra.blocks)


def conditional_active_effect_algebra(
    cs: CausalSpace,
    coords: Iterable[str],
    subject: Subject,
    a: Event,
    algebra: Partition,
) -> EffectVerdict:
    """Active-effect verdict with both measures conditioned on a sigma-algebra.

    Undetermined unless the observational and the row measure are mutually
    absolutely continuous on the algebra; otherwise compares the conditional
    probabilities of `a` block by block over the positive-measure blocks.
    """
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    p = cs.observational
    a = frozenset(a)
    saw_undetermined = False
    for key in _subject_keys(cs, coords, subject):
        row_val = lambda ev: kernel.value(key, ev)  # noqa: E731 - tiny row accessor
        if not _mac_on(p, row_val, algebra):
            saw_undetermined = True
            continue
        for block in algebra.blocks:
            pb = p(block)
            if pb == 0:
                continue
            if p(block & a) * row_val(block) != row_val(block & a) * pb:
                return ACTIVE
    if saw_undetermined:
        return undetermined(NOT_MUTUALLY_ABS_CONT)
    return NO_EFFECT


def conditional_classify_algebra(
    cs: CausalSpace,
    coords: Iterable[str],
    subject: Subject,
    target: Target,
    algebra: Partition,
    block_cap: Optional[int] = None,
) -> EffectVerdict:
    """Trichotomy verdict conditioned on a sigma-algebra.

    Mirrors the event form: the active comparison and its mutual-continuity
    premise use only the kernel on `coords`; the quantified check over every
    subset runs only when those leave the verdict open.
    """
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    p = cs.observational
    targets = [frozenset(t) for t in _targets(cs, target, block_cap)]
    keys = _subject_keys(cs, coords, subject)
    saw_undetermined = saw_dormant = False
    for key in keys:
        row_val = lambda ev: kernel.value(key, ev)  # noqa: E731
        if not _mac_on(p, row_val, algebra):
            saw_undetermined = True
            continue
        for a in targets:
            hit = False
            for block in algebra.blocks:
                pb = p(block)
                if pb and p(block & a) * row_val(block) != row_val(block & a) * pb:
                    hit = True
                    break
            if hit:
                return ACTIVE
    if saw_undetermined:
        return undetermined(NOT_MUTUALLY_ABS_CONT)
    _require_all_kernels(cs)
    for key in keys:
        rows = _effect_pairs(cs, coords, key)
        if not all(_mac_on(lambda e: kj.value(r1, e), lambda e: kr.value(r2, e), algebra) for kj, r1, kr, r2 in rows):
            saw_undetermined = True
            continue
        for a in targets:
            found = False
            for kj, r1, kr, r2 in rows:
                for block in algebra.blocks:
                    d1 = kj.value(r1, block)
                    if d1 == 0:
                        continue
                    if kj.value(r1, block & a) * kr.value(r2, block) != kr.value(r2, block & a) * d1:
                        found = True
                        break
                if found:
                    break
            if found:
                saw_dormant = True
                break
    if saw_undetermined:
        return undetermined(NOT_MUTUALLY_ABS_CONT)
    return DORMANT if saw_dormant else NO_EFFECT


# ---------------------------------------------------------------------------
# post-intervention variants


def _post_active_rows(cs: CausalSpace, u: frozenset, v: frozenset, key: Outcome):
    """Row pairs compared by the post-intervention active-effect definition."""
    space = cs.space
    k_uv = cs.kernel(u | v)
    k_v = cs.kernel(v)
    on_u = dict(zip(space.ordered(u), key))
    pairs = []
    for part in space.subspace(v - u).outcomes:
        extra = dict(zip(space.ordered(v - u), part))
        row1 = _merge_key(space, u | v, {**on_u, **extra})
        row2 = _merge_key(space, v, {**{c: on_u[c] for c in u & v}, **extra})
        pairs.append((k_uv, row1, k_v, row2))
    return pairs


def post_intervention_active_effect(
    cs: CausalSpace,
    u: Iterable[str],
    v: Iterable[str],
    subject: Subject,
    a: Event,
) -> bool:
    """Whether intervening on `u` still moves `a` once `v` has been intervened on."""
    u, v = cs.space.check_subset(u), cs.space.check_subset(v)
    a = frozenset(a)
    for key in _subject_keys(cs, u, subject):
        for kj, r1, kr, r2 in _post_active_rows(cs, u, v, key):
            if kj.value(r1, a) != kr.value(r2, a):
                return True
    return False


def _post_effect_pairs(cs: CausalSpace, u: frozenset, v: frozenset, key: Outcome):
    """Row pairs of the quantified post-intervention no-effect definition."""
    space = cs.space
    on_u = dict(zip(space.ordered(u), key))
    pairs = []
    for s in subsets_in_order(space.ids):
        joint = s | v
        reduced = joint - (u - v)
        k_joint = cs.kernel(joint)
        k_red = cs.kernel(reduced)
        kept = joint & (u - v)
        for part in space.subspace(reduced).outcomes:
            cell = {**{c: on_u[c] for c in kept}, **dict(zip(space.ordered(reduced), part))}
            row1 = _merge_key(space, joint, cell)
            pairs.append((k_joint, row1, k_red, part))
    return pairs


def _post_required_subsets(space_ids, u: frozenset, v: frozenset):
    needed = {u | v, v}
    for s in subsets_in_order(space_ids):
        needed.add(s | v)
        needed.add((s | v) - (u - v))
    return needed


def post_intervention_classify(
    cs: CausalSpace,
    u: Iterable[str],
    v: Iterable[str],
    subject: Subject,
    target: Target,
    block_cap: Optional[int] = None,
) -> EffectVerdict:
    """No/active/dormant verdict for interventions on `u` after fixing `v`.

    The active comparison needs the kernels on the union and on `v` alone;
    the quantified no-effect check requires the wider family and raises on
    the first missing subset in canonical order.
    """
    u, v = cs.space.check_subset(u), cs.space.check_subset(v)
    keys = _subject_keys(cs, u, subject)
    targets = _targets(cs, target, block_cap)
    for key in keys:
        rows = _post_active_rows(cs, u, v, key)
        for a in targets:
            if any(kj.value(r1, a) != kr.value(r2, a) for kj, r1, kr, r2 in rows):
                return ACTIVE
    needed = _post_required_subsets(cs.space.ids, u, v)
    for s in subsets_in_order(cs.space.ids):
        if s in needed and not cs.has_kernel(s):
            raise KernelMissingError(s)
    for key in keys:
        pairs = _post_effect_pairs(cs, u, v, key)
        for a in targets:
            if any(kj.value(r1, a) != kr.value(r2, a) for kj, r1, kr, r2 in pairs):
                return DORMANT
    return NO_EFFECT


# ---------------------------------------------------------------------------
# effect queries


@dataclass(frozen=True)
class EffectQuery:
    """One effect question: who intervenes, on what, compared how.

    `subject` is an outcome or a nonempty event; `target` an event or a
    partition; `given` conditions the comparison; `post` asks the
    post-intervention variant (mutually exclusive with `given`).
    """

    intervention: frozenset
    subject: Subject
    target: Target
    given: Union[Event, Partition, None] = None
    post: Optional[frozenset] = None

    def __post_init__(self):
        object.__setattr__(self, "intervention", frozenset(self.intervention))
        if self.post is not None:
            object.__setattr__(self, "post", frozenset(self.post))
            if self.given is not None:
                raise ValueError("a query conditions or post-intervenes, not both")


def run_query(
    cs: CausalSpace,
    query: EffectQuery,
    active_only: bool = False,
    block_cap: Optional[int] = None,
) -> EffectVerdict:
    """Dispatch an :class:`EffectQuery` to the matching verdict operation.

    With `active_only` the cheaper active-effect checks run (no full kernel
    family needed); otherwise the trichotomy operations run.
    """
    u, subject, target = query.intervention, query.subject, query.target
    if query.post is not None:
        if active_only:
            hit = post_intervention_active_effect(cs, u, query.post, subject, target) \
                if not isinstance(target, Partition) else \
                any(post_intervention_active_effect(cs, u, query.post, subject, a)
                    for a in algebra_events(target, block_cap))
            return ACTIVE if hit else NO_EFFECT
        return post_intervention_classify(cs, u, query.post, subject, target, block_cap)
    if isinstance(query.given, Partition):
        if active_only:
            if isinstance(target, Partition):
                return _scan_algebra(lambda a: conditional_active_effect_algebra(cs, u, subject, a, query.given), target, block_cap)
            return conditional_active_effect_algebra(cs, u, subject, target, query.given)
        return conditional_classify_algebra(cs, u, subject, target, query.given, block_cap)
    if query.given is not None:
        g = frozenset(query.given)
        if active_only:
            if isinstance(target, Partition):
                return _scan_algebra(lambda a: conditional_active_effect_event(cs, u, subject, a, g), target, block_cap)
            return conditional_active_effect_event(cs, u, subject, target, g)
        return conditional_classify_event(cs, u, subject, target, g, block_cap)
    if active_only:
        if isinstance(target, Partition):
            hit = active_effect_on_algebra(cs, u, subject, target, block_cap)
        elif isinstance(subject, tuple):
            hit = active_effect(cs, u, subject, target)
        else:
            hit = active_effect_event(cs, u, subject, target)
        return ACTIVE if hit else NO_EFFECT
    return classify(cs, u, subject, target, block_cap)


def _scan_algebra(check, target: Partition, block_cap) -> EffectVerdict:
    saw_undetermined = None
    for a in algebra_events(target, block_cap):
        v = check(a)
        if v.tag is EffectTag.ACTIVE:
            return v
        if v.tag is EffectTag.UNDETERMINED:
            saw_undetermined = v
    return saw_undetermined or NO_EFFECT


# ---------------------------------------------------------------------------
# executable forms of the independence results


def check_lemma1(cs: CausalSpace, coords: Iterable[str], a: Event, q: Measure) -> bool:
    """No active effect anywhere implies independence under the intervention.

    Verifies the premise (every row leaves the probability of `a` unchanged)
    and then actually tests independence of `a` and the coordinate algebra
    under the mixed measure; a theorem, so False means an implementation bug.
    """
    coords = cs.space.check_subset(coords)
    kernel = cs.kernel(coords)
    a = frozenset(a)
    pa = cs.observational(a)
    if any(kernel.value(key, a) != pa for key in cs.space.subspace(coords).outcomes):
        raise PremiseNotMetError("some outcome has an active effect on the event")
    pdo = intervention_measure(cs, InterventionSpec(coords, q))
    return independent(pdo, a, coordinate_subalgebra(cs.space, coords))


def check_prop2(
    cs: CausalSpace,
    coords: Iterable[str],
    a: Event,
    given: Union[Event, Partition],
    q: Measure,
) -> bool:
    """No conditional active effect anywhere implies conditional independence."""
    coords = cs.space.check_subset(coords)
    a = frozenset(a)
    whole = frozenset(cs.space.outcomes)
    if isinstance(given, Partition):
        verdict = conditional_active_effect_algebra(cs, coords, whole, a, given)
    else:
        verdict = conditional_active_effect_event(cs, coords, whole, a, frozenset(given))
    if verdict.tag is not EffectTag.NO_EFFECT:
        raise PremiseNotMetError(f"conditional active-effect verdict is {verdict}")
    pdo = intervention_measure(cs, InterventionSpec(coords, q))
    result = cond_independent(pdo, a, coordinate_subalgebra(cs.space, coords), given)
    return bool(result)


def check_prop3(
    cs: CausalSpace,
    u: Iterable[str],
    v: Iterable[str],
    omega: Outcome,
    a: Event,
    q_on_v: Optional[Measure] = None,
    q_on_u: Optional[Measure] = None,
) -> bool:
    """No post-intervention active effect is preserved by actually intervening.

    Part (i), checked when `u` and `v` are disjoint and `q_on_v` is given: in
    the space intervened on `v`, the subject has no active `u`-effect on `a`.
    Part (ii), checked when `q_on_u` is given: in the space intervened on `u`,
    the post-intervention no-effect statement still holds.
    """
    u, v = cs.space.check_subset(u), cs.space.check_subset(v)
    omega = cs.space.check_outcome(omega)
    a = frozenset(a)
    if post_intervention_active_effect(cs, u, v, omega, a):
        raise PremiseNotMetError("the subject has an active post-intervention effect")
    if q_on_v is None and q_on_u is None:
        raise ValueError("provide a mixing measure for part (i), part (ii), or both")
    ok = True
    if q_on_v is not None and not (u & v):
        after_v = intervene(cs, InterventionSpec(v, q_on_v))
        ok = ok and not active_effect(after_v, u, omega, a)
    if q_on_u is not None:
        after_u = intervene(cs, InterventionSpec(u, q_on_u))
        ok = ok and not post_intervention_active_effect(after_u, u, v, omega, a)
    return ok
