"""Command-line front end: validate, intervene, marginalize, query, score, generate.

Reports are deterministic for a given document, query, and seed; every exact
number is rendered as a fraction string plus a decimal approximation, and
``--format json`` mirrors the text report field for field.

Exit codes: 0 success or a determined verdict, 1 validation failure,
2 undetermined verdict, 3 missing kernel, 4 parse/usage error. The
CEE_BLOCK_CAP environment variable overrides the 16-block cap on
sigma-algebra enumeration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Union

from . import effects
from .document import (
    SpaceDocument,
    decimal_str,
    document_from_space,
    document_violations,
    dumps_document,
    fraction_str,
    load_document,
    marginalize_document,
    to_causal_space,
)
from .errors import CausalSpacesError, DocumentError, KernelMissingError
from .generators import GenConfig, gen_dormant_space, gen_null_effect_space, gen_random_space, gen_screened_space
from .kernels import CausalSpace, InterventionSpec, intervene, validate
from .measure import Measure, uniform
from .scores import (
    F1,
    F2,
    MEAN_AND_VARIANCE_DIFF,
    MEAN_DIFF,
    TOTAL_VARIATION,
    VARIANCE_DIFF,
    max_effect_score_algebra,
    max_effect_score_event,
    mean_effect_score_algebra,
    mean_effect_score_event,
)
from .space import Event, Partition, coordinate_subalgebra

_SCALES = {"f1": F1, "f2": F2}
_DIFFS = {"mean": MEAN_DIFF, "var": VARIANCE_DIFF, "tv": TOTAL_VARIATION, "mean+var": MEAN_AND_VARIANCE_DIFF}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise _UsageError(message)


def _num(x) -> dict:
    if isinstance(x, Fraction):
        return {"fraction": fraction_str(x), "decimal": decimal_str(x)}
    return {"decimal": repr(float(x))}


def _num_text(x) -> str:
    if isinstance(x, Fraction):
        return f"{fraction_str(x)} (= {decimal_str(x)})"
    return repr(float(x))


def _cell(o) -> str:
    return ",".join(o)


def _block_cap() -> Optional[int]:
    raw = os.environ.get("CEE_BLOCK_CAP")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"CEE_BLOCK_CAP must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# argument resolution against a loaded document


def _parse_assignment(text: str) -> dict[str, str]:
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise _UsageError(f"expected coord=label, got {item!r}")
        cid, label = item.split("=", 1)
        out[cid.strip()] = label.strip()
    return out


def _predicate_event(doc: SpaceDocument, text: str) -> Event:
    constraints = {}
    for item in text.split(","):
        if "=" not in item:
            raise _UsageError(f"expected coord=label (or coord=a|b), got {item!r}")
        cid, labels = item.split("=", 1)
        constraints[cid.strip()] = [l.strip() for l in labels.split("|")]
    try:
        return doc.space.where(**constraints)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _resolve_event(doc: SpaceDocument, text: str) -> Event:
    if text in doc.events:
        return doc.events[text]
    return _predicate_event(doc, text)


def _resolve_partition(doc: SpaceDocument, text: str) -> Partition:
    if text in doc.partitions:
        return doc.partitions[text]
    try:
        coords = doc.space.check_subset([t for t in text.split(",") if t])
    except ValueError:
        raise _UsageError(f"{text!r} is neither a named partition nor a coordinate list") from None
    return coordinate_subalgebra(doc.space, coords)


def _resolve_given(doc: SpaceDocument, text: str) -> Union[Event, Partition]:
    if text in doc.events:
        return doc.events[text]
    if text in doc.partitions:
        return doc.partitions[text]
    return _predicate_event(doc, text)


def _resolve_subject(doc: SpaceDocument, omega: Optional[str], subject: Optional[str]):
    if (omega is None) == (subject is None):
        raise _UsageError("give exactly one of --omega or --subject")
    if omega is not None:
        assignment = _parse_assignment(omega)
        coords = doc.space.check_subset(assignment)
        if len(coords) == len(doc.space.ids):
            return tuple(assignment[cid] for cid in doc.space.ids)
        return doc.space.where(**{cid: assignment[cid] for cid in assignment})
    return _resolve_event(doc, subject)


def _resolve_q(doc: SpaceDocument, coords: frozenset, text: Optional[str]) -> Measure:
    sub = doc.space.subspace(coords)
    if text is None:
        if not coords:
            return uniform(sub)
        raise _UsageError("--Q is required when -U is nonempty")
    if text == "uniform":
        return uniform(sub)
    if text.startswith("delta:"):
        assignment = _parse_assignment(text[len("delta:"):])
        if set(assignment) != set(coords):
            raise _UsageError("a delta measure must pin exactly the intervened coordinates")
        return Measure(sub, {tuple(assignment[cid] for cid in sub.ids): Fraction(1)})
    if text in doc.measures:
        mcoords, _ = doc.measures[text]
        if mcoords != coords:
            raise _UsageError(f"named measure {text!r} is on other coordinates")
        return doc.named_measure(text)
    raise _UsageError(f"{text!r} is not delta:..., uniform, or a named measure")


def _subset(doc: SpaceDocument, text: Optional[str]) -> frozenset:
    if not text:
        return frozenset()
    try:
        return doc.space.check_subset([t for t in text.split(",") if t])
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _load_checked(path: str) -> tuple[SpaceDocument, CausalSpace]:
    """Load a document and enforce its invariant: it must pass validation."""
    doc = load_document(path)
    violations = document_violations(doc)
    if not violations:
        cs = to_causal_space(doc)
        violations = validate(cs)
    if violations:
        for v in violations:
            print(f"invalid document: {v}", file=sys.stderr)
        raise SystemExit(1)
    return doc, cs


# ---------------------------------------------------------------------------
# report emission


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
        return
    for line in _text_lines(report, ""):
        print(line)


def _text_lines(obj, prefix: str):
    if isinstance(obj, dict):
        if set(obj) <= {"fraction", "decimal"}:
            yield f"{prefix}: {obj.get('fraction', '')}{' (= ' + obj['decimal'] + ')' if 'fraction' in obj else obj['decimal']}"
            return
        for key, value in obj.items():
            yield from _text_lines(value, f"{prefix}.{key}" if prefix else key)
    elif isinstance(obj, list):
        if not obj:
            yield f"{prefix}: (none)"
        elif all(isinstance(v, str) for v in obj):
            yield f"{prefix}: " + " | ".join(obj)
        else:
            for i, value in enumerate(obj):
                yield from _text_lines(value, f"{prefix}[{i}]")
    else:
        yield f"{prefix}: {obj}"


def _echo_target(doc: SpaceDocument, target) -> dict:
    if isinstance(target, Partition):
        return {"partition": [[_cell(o) for o in doc.space.sort_event(b)] for b in target.blocks]}
    return {"event": [_cell(o) for o in doc.space.sort_event(target)]}


def _echo_subject(doc: SpaceDocument, subject) -> dict:
    if isinstance(subject, tuple):
        return {"outcome": _cell(subject)}
    return {"event": [_cell(o) for o in doc.space.sort_event(subject)]}


def _verdict_exit(verdict: effects.EffectVerdict) -> int:
    return 0 if verdict.determined else 2


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(args) -> int:
    doc = load_document(args.file)
    violations = document_violations(doc)
    if not violations:
        violations = validate(to_causal_space(doc))
    report = {
        "command": "validate",
        "violations": [
            {
                "kind": v.kind,
                "kernel": ",".join(sorted(v.kernel)) if v.kernel is not None else None,
                "row": _cell(v.row) if v.row is not None else None,
                "outcome": _cell(v.outcome) if v.outcome is not None else None,
                "detail": v.detail,
            }
            for v in violations
        ],
        "ok": not violations,
    }
    _emit(report, args.format)
    return 0 if not violations else 1


def _effect_query(doc: SpaceDocument, args) -> effects.EffectQuery:
    u = _subset(doc, args.U)
    subject = _resolve_subject(doc, args.omega, args.subject)
    if (args.event is None) == (args.sigma is None):
        raise _UsageError("give exactly one of --event (target event) or --sigma (target partition)")
    target = _resolve_event(doc, args.event) if args.event else _resolve_partition(doc, args.sigma)
    given = _resolve_given(doc, args.given) if args.given else None
    post = _subset(doc, args.V) if args.V is not None else None
    return effects.EffectQuery(u, subject, target, given=given, post=post)


def _comparisons(doc: SpaceDocument, cs: CausalSpace, query: effects.EffectQuery) -> list:
    """The quantities the active-effect definitions compare, for the report."""
    if isinstance(query.target, Partition):
        return []
    space, p, a = doc.space, cs.observational, frozenset(query.target)
    u = query.intervention
    kernel = cs.kernel(u)
    if isinstance(query.subject, tuple):
        keys = [space.restrict(query.subject, u)]
    else:
        keys = sorted(
            {space.restrict(o, u) for o in query.subject},
            key={k: i for i, k in enumerate(space.subspace(u).outcomes)}.__getitem__,
        )
    out = []
    for key in keys:
        entry: dict = {"row": _cell(key)}
        if query.post is not None:
            v = space.ordered(query.post - u)
            joint = cs.kernel(u | query.post)
            base = cs.kernel(query.post)
            inner = []
            for part in space.subspace(query.post - u).outcomes:
                cell = {**dict(zip(space.ordered(u), key)), **dict(zip(v, part))}
                row1 = tuple(cell[c] for c in space.ordered(u | query.post))
                row2 = tuple(cell[c] for c in space.ordered(query.post))
                inner.append({"fixed": _cell(part), "lhs": _num(joint.value(row1, a)), "rhs": _num(base.value(row2, a))})
            entry["comparisons"] = inner
        elif isinstance(query.given, Partition):
            inner = []
            for block in query.given.blocks:
                pb, kb = p(block), kernel.value(key, block)
                item: dict = {"block": [_cell(o) for o in space.sort_event(block)]}
                if pb > 0 and kb > 0:
                    item["lhs"] = _num(kernel.value(key, block & a) / kb)
                    item["rhs"] = _num(p(block & a) / pb)
                else:
                    item["undefined"] = True
                inner.append(item)
            entry["comparisons"] = inner
        elif query.given is not None:
            g = frozenset(query.given)
            pg, kg = p(g), kernel.value(key, g)
            if pg > 0 and kg > 0:
                entry["lhs"] = _num(kernel.value(key, g & a) / kg)
                entry["rhs"] = _num(p(g & a) / pg)
            else:
                entry["undefined"] = True
        else:
            entry["lhs"] = _num(kernel.value(key, a))
            entry["rhs"] = _num(p(a))
        out.append(entry)
    return out


def _cmd_effect(args, trichotomy: bool) -> int:
    doc, cs = _load_checked(args.file)
    query = _effect_query(doc, args)
    verdict = effects.run_query(cs, query, active_only=not trichotomy, block_cap=_block_cap())
    report = {
        "command": "classify" if trichotomy else "effect",
        "query": {
            "intervention": ",".join(sorted(query.intervention)),
            **({"post": ",".join(sorted(query.post))} if query.post is not None else {}),
            "subject": _echo_subject(doc, query.subject),
            "target": _echo_target(doc, query.target),
            **(
                {"given": _echo_target(doc, query.given) if isinstance(query.given, Partition) else _echo_subject(doc, query.given)}
                if query.given is not None
                else {}
            ),
        },
        "verdict": verdict.tag.value,
        **({"reason": str(verdict.reason)} if verdict.reason else {}),
    }
    if not trichotomy:
        report["compared"] = _comparisons(doc, cs, query)
    _emit(report, args.format)
    return _verdict_exit(verdict)


def _cmd_score(args) -> int:
    doc, cs = _load_checked(args.file)
    u = _subset(doc, args.U)
    if (args.event is None) == (args.sigma is None):
        raise _UsageError("give exactly one of --event or --sigma")
    variable = None
    if args.rv is not None:
        if args.rv not in doc.variables:
            raise _UsageError(f"unknown variable {args.rv!r}")
        variable = doc.variables[args.rv]
    report: dict = {"command": "score", "query": {"intervention": ",".join(sorted(u))}}
    if args.max:
        subject = doc.space.all_event() if args.omega is None and args.subject is None else _resolve_subject(doc, args.omega, args.subject)
        if isinstance(subject, tuple):
            subject = frozenset([subject])
        report["query"]["subject"] = _echo_subject(doc, subject)
    else:
        q = _resolve_q(doc, u, args.Q)
        report["query"]["q"] = {_cell(o): _num(w) for o, w in sorted(q.weights.items())}
    if args.event is not None:
        target = _resolve_event(doc, args.event)
        scale = _SCALES[args.scale]
        report["query"]["target"] = _echo_target(doc, target)
        report["query"]["scale"] = scale.name
        if args.max:
            score = max_effect_score_event(cs, u, subject, target, scale)
        else:
            score = mean_effect_score_event(cs, u, q, target, scale)
    else:
        target = _resolve_partition(doc, args.sigma)
        functional = _DIFFS[args.diff]
        report["query"]["target"] = _echo_target(doc, target)
        report["query"]["functional"] = functional.name
        if args.rv is not None:
            report["query"]["variable"] = args.rv
        if args.max:
            score = max_effect_score_algebra(cs, u, subject, target, functional, variable)
        else:
            score = mean_effect_score_algebra(cs, u, q, target, functional, variable)
    value = score.value
    report["score"] = [_num(v) for v in value] if isinstance(value, tuple) else _num(value)
    if args.max:
        report["argmax"] = _cell(score.argmax)
        report["tied"] = score.tied
    _emit(report, args.format)
    return 0


def _cmd_intervene(args) -> int:
    doc, cs = _load_checked(args.file)
    u = _subset(doc, args.U)
    spec = InterventionSpec(u, _resolve_q(doc, u, args.Q))
    new = intervene(cs, spec)
    out = document_from_space(new, doc.events, doc.partitions, doc.variables, doc.measures)
    sys.stdout.write(dumps_document(out))
    return 0


def _cmd_marginalize(args) -> int:
    doc, _ = _load_checked(args.file)
    coords = _subset(doc, args.coords)
    if not coords:
        raise _UsageError("--coords must name at least one coordinate")
    sys.stdout.write(dumps_document(marginalize_document(doc, coords)))
    return 0


def _cmd_gen(args) -> int:
    cfg = GenConfig(
        seed=args.seed,
        max_coords=args.max_coords,
        max_labels=args.max_labels,
        kernel_mode=args.mode,
        denominator_bound=args.denom_bound,
    )
    if args.dormant:
        cs = gen_dormant_space()
    elif args.screened:
        cs = gen_screened_space(cfg)
    elif args.null_effect is not None:
        cs = gen_null_effect_space(cfg, frozenset(args.null_effect.split(",")))
    else:
        cs = gen_random_space(cfg)
    sys.stdout.write(dumps_document(document_from_space(cs)))
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _add_query_flags(p: _Parser) -> None:
    p.add_argument("-U", default="", help="intervened coordinates, comma-separated")
    p.add_argument("-V", default=None, help="already-intervened coordinates (post-intervention variant)")
    p.add_argument("--omega", default=None, help="subject outcome as coord=label,...; a partial assignment is its cylinder event")
    p.add_argument("--subject", default=None, help="subject event: a named event or a predicate")
    p.add_argument("--event", default=None, help="target event: a named event or a predicate like pay=1000")
    p.add_argument("--sigma", default=None, help="target partition: a name or a coordinate list")
    p.add_argument("--given", default=None, help="conditioning event or partition (name or predicate)")


def build_parser() -> _Parser:
    parser = _Parser(prog="cee", description="Causal effects on events over finite causal spaces, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("validate", help="check a space document against the causal-space axioms")
    p.add_argument("file")
    common(p)

    p = sub.add_parser("effect", help="active-effect verdicts (marginal, conditional, post-intervention)")
    p.add_argument("file")
    p.add_argument("--active", action="store_true", help="explicitly request the active-effect check (the default)")
    _add_query_flags(p)
    common(p)

    p = sub.add_parser("classify", help="full no/active/dormant verdicts (needs the full kernel family)")
    p.add_argument("file")
    _add_query_flags(p)
    common(p)

    p = sub.add_parser("score", help="mean and maximum effect scores")
    p.add_argument("file")
    p.add_argument("-U", default="")
    p.add_argument("--Q", default=None, help="mixing measure: delta:coord=label,... | uniform | a named measure")
    p.add_argument("--event", default=None)
    p.add_argument("--sigma", default=None)
    p.add_argument("--scale", choices=sorted(_SCALES), default="f1")
    p.add_argument("--diff", choices=("mean", "var", "tv", "mean+var"), default="mean")
    p.add_argument("--rv", default=None, help="named random variable for mean/variance functionals")
    p.add_argument("--max", action="store_true", help="maximum score over a subject event (default: the whole space)")
    p.add_argument("--omega", default=None)
    p.add_argument("--subject", default=None)
    common(p)

    p = sub.add_parser("intervene", help="emit the intervened space as a document")
    p.add_argument("file")
    p.add_argument("-U", default="")
    p.add_argument("--Q", default=None)
    common(p)

    p = sub.add_parser("marginalize", help="emit the marginal space over --coords as a document")
    p.add_argument("file")
    p.add_argument("--coords", required=True)
    common(p)

    p = sub.add_parser("gen", help="emit a generated space as a document")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-coords", type=int, default=3)
    p.add_argument("--max-labels", type=int, default=3)
    p.add_argument("--mode", choices=("full", "partial"), default="full")
    p.add_argument("--denom-bound", type=int, default=32)
    p.add_argument("--null-effect", default=None, metavar="COORDS", help="null-effect construction on these coordinates")
    p.add_argument("--dormant", action="store_true", help="the fixed copy construction with a dormant effect")
    p.add_argument("--screened", action="store_true", help="a seeded screened-mediator construction")
    common(p)

    return parser


_DISPATCH = {
    "validate": _cmd_validate,
    "effect": lambda args: _cmd_effect(args, trichotomy=False),
    "classify": lambda args: _cmd_effect(args, trichotomy=True),
    "score": _cmd_score,
    "intervene": _cmd_intervene,
    "marginalize": _cmd_marginalize,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 4
    except DocumentError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 4
    except KernelMissingError as exc:
        print(f"missing kernel: {exc}", file=sys.stderr)
        return 3
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    except (CausalSpacesError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
