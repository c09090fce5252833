"""Command-line front end.

One command per invocation; structured output is a single JSON document with
a versioned schema, element values rendered as construction-native literals
(raw codes only behind --debug-codes), query counts, and confidence data.
Exit codes: 0 success, 2 parse error, 3 precondition error, 4 low-confidence
result under the sampled backend (1 is reserved for --verify divergence and
unexpected faults).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from . import ringops as ops
from . import verify
from .blackbox import (
    DESK_CAP,
    MatrixSpec,
    ModularSpec,
    brute_force_enumerate,
    format_element,
    make_ring,
    parse_element_literal,
    parse_ring_file,
    _split_top_level,
)
from .errors import (
    LowConfidenceError,
    MembershipError,
    ParseError,
    PreconditionError,
    VerificationError,
)
from .idealcore import IdealSpec, find_basis_representation, membership_witness
from .qsim import PrimitiveProvider, ProviderConfig, fork_seed
from .ringops import HomomorphismOracle

SCHEMA = "ringbox.run/1"

COMMANDS = (
    "basis",
    "order",
    "ring-order",
    "equal",
    "member",
    "witness",
    "intersect",
    "colon",
    "annihilate",
    "unit",
    "inverse",
    "one",
    "zero",
    "neg",
    "solve",
    "prime",
    "hom-kernel",
    "hom-injective",
    "hom-surjective",
    "bench-queries",
)


@dataclass
class RunConfig:
    command: str
    ring_path: str | None = None
    ring_text: str | None = None
    ideal: str | None = None
    ideal2: str | None = None
    side: str | None = None
    element: str | None = None
    elements: str | None = None
    a: str | None = None
    b: str | None = None
    ring2_path: str | None = None
    ring2_text: str | None = None
    hom: str | None = None
    backend: str = "exact"
    seed: int = 0
    epsilon: float = 1e-6
    verify: bool = False
    count_queries: bool = False
    json_out: bool = False
    debug_codes: bool = False
    prime_period_finding: bool = False
    family: str | None = None
    k_min: int = 4
    k_max: int = 14


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ringbox",
        description="ideal arithmetic in finite black-box rings",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--ring", help="ring description file")
    p.add_argument("--ideal", help="comma-separated generator literals")
    p.add_argument("--ideal2", help="second ideal's generator literals")
    p.add_argument("--side", choices=("left", "right", "two"))
    p.add_argument("--element", help="element literal (member/witness/unit/inverse/neg)")
    p.add_argument("--elements", help="element literal list (annihilate)")
    p.add_argument("--a", help="left-hand element literal for solve")
    p.add_argument("--b", help="right-hand element literal for solve")
    p.add_argument("--ring2", help="codomain ring description file (hom commands)")
    p.add_argument("--hom", help="homomorphism kind: identity | mod")
    p.add_argument("--backend", choices=("exact", "sampled"), default="exact")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--count-queries", action="store_true")
    p.add_argument("--json", dest="json_out", action="store_true")
    p.add_argument("--debug-codes", action="store_true")
    p.add_argument(
        "--prime-period-finding",
        action="store_true",
        help="use simulated period finding in the prime test",
    )
    p.add_argument("--family", choices=("modular", "matrix2"), default="modular")
    p.add_argument("--k-min", type=int, default=4)
    p.add_argument("--k-max", type=int, default=14)
    return p


def config_from_args(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("RINGBOX_SEED", "0"))
    return RunConfig(
        command=args.command,
        ring_path=args.ring,
        ideal=args.ideal,
        ideal2=args.ideal2,
        side=args.side,
        element=args.element,
        elements=args.elements,
        a=args.a,
        b=args.b,
        ring2_path=args.ring2,
        hom=args.hom,
        backend=args.backend,
        seed=seed,
        epsilon=args.epsilon,
        verify=args.verify,
        count_queries=args.count_queries,
        json_out=args.json_out,
        debug_codes=args.debug_codes,
        prime_period_finding=args.prime_period_finding,
        family=args.family,
        k_min=args.k_min,
        k_max=args.k_max,
    )


class _Session:
    """Everything one command invocation needs."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.warnings: list[str] = []
        self.ring = None
        self.ring2 = None
        if config.command != "bench-queries":
            text = config.ring_text
            if text is None:
                if not config.ring_path:
                    raise ParseError("--ring FILE is required")
                with open(config.ring_path) as fh:
                    text = fh.read()
            self.ring = make_ring(parse_ring_file(text), config.seed)
        if config.command.startswith("hom-"):
            text2 = config.ring2_text
            if text2 is None:
                if not config.ring2_path:
                    raise ParseError("--ring2 FILE is required for hom commands")
                with open(config.ring2_path) as fh:
                    text2 = fh.read()
            self.ring2 = make_ring(parse_ring_file(text2), fork_seed(config.seed, "ring2"))
        self.provider = PrimitiveProvider(
            ProviderConfig(
                backend=config.backend, epsilon=config.epsilon, seed=config.seed
            )
        )
        self._rep = None

    @property
    def ring_rep(self):
        if self._rep is None:
            self._rep = ops.ring_representation(self.ring, self.provider)
        return self._rep

    def side(self, default="left") -> str:
        return self.config.side or default

    def parse_elements(self, text, what) -> tuple:
        if text is None:
            raise ParseError(f"missing {what}")
        # literals themselves may contain commas (tuples, matrices): try the
        # whole string first; lists split on ';;' when present (matrix
        # literals use single ';' internally), else on top-level commas
        try:
            return (parse_element_literal(self.ring, text),)
        except ParseError:
            pass
        parts = text.split(";;") if ";;" in text else _split_top_level(text, ",")
        if len(parts) < 2:
            raise ParseError(f"cannot parse {what}: {text!r}")
        return tuple(parse_element_literal(self.ring, p) for p in parts)

    def ideal_spec(self, text, what="--ideal", side_default="left") -> IdealSpec:
        gens = self.parse_elements(text, what)
        size = self.ring._ring_size()
        soft = 2 * max(1, size.bit_length()) + 8
        if len(gens) > soft:
            self.warnings.append(
                f"{what}: {len(gens)} generators exceeds the soft bound {soft}"
            )
        return IdealSpec(self.side(side_default), gens)

    def fmt(self, code) -> str:
        return format_element(self.ring, code)

    def fmt2(self, code) -> str:
        return format_element(self.ring2, code)

    def hom_oracle(self) -> HomomorphismOracle:
        kind = (self.config.hom or "identity").strip().lower()
        if kind == "identity":
            if self.ring.spec != self.ring2.spec:
                raise ParseError("identity hom needs identical ring descriptions")
            src, dst = self.ring, self.ring2

            def mapping(code):
                return dst._encode(src._decode(code))

            return HomomorphismOracle(src, dst, mapping, name="identity")
        if kind == "mod":
            if not isinstance(self.ring.spec, ModularSpec) or not isinstance(
                self.ring2.spec, ModularSpec
            ):
                raise ParseError("mod hom needs modular rings on both sides")
            n1, n2 = self.ring.spec.n, self.ring2.spec.n
            if n1 % n2:
                raise ParseError(f"mod hom needs {n2} | {n1}")
            src, dst = self.ring, self.ring2

            def mapping(code):
                return dst._encode(src._decode(code) % n2)

            return HomomorphismOracle(src, dst, mapping, name="mod")
        raise ParseError(f"unknown hom kind {kind!r}")


def _brute_context(session):
    ring = session.ring
    if ring._ring_size() > DESK_CAP:
        raise PreconditionError("--verify needs ring order within the desk cap")
    elems = verify.ring_elements(ring)
    return elems


def _check(diffs, name, got, want):
    if got != want:
        diffs.append({"check": name, "got": got, "want": want})


def run(config: RunConfig):
    """Execute one command; returns (exit_code, report dict, human lines)."""
    session = _Session(config)
    handler = _HANDLERS[config.command]
    result, human, confidence = handler(session)
    report = {
        "schema": SCHEMA,
        "command": config.command,
        "backend": config.backend,
        "seed": config.seed,
        "ring": session.ring.spec.describe() if session.ring else None,
        "inputs": {
            "ideal": config.ideal,
            "ideal2": config.ideal2,
            "side": config.side,
            "element": config.element,
            "elements": config.elements,
            "a": config.a,
            "b": config.b,
            "hom": config.hom,
        },
        "result": result,
        "queries": _query_block(session),
        "confidence": confidence,
        "warnings": session.warnings,
    }
    return 0, report, human


def _query_block(session):
    if session.ring is None:
        return None
    led = session.ring.ledger
    vled = session.ring.verification_ledger
    return {
        "add": led.add_count,
        "mul": led.mul_count,
        "verification_add": vled.add_count,
        "verification_mul": vled.mul_count,
    }


def _confidence(session, extra=None):
    cfg = session.config
    decisions = session.provider.stats["decisions"]
    if cfg.backend == "exact":
        block = {"backend": "exact", "decisions": decisions, "bound": 1.0}
    else:
        bound = max(0.0, 1.0 - decisions * cfg.epsilon)
        block = {"backend": "sampled", "decisions": decisions, "bound": bound}
    if extra:
        block.update(extra)
    return block


# -- command handlers -----------------------------------------------------


def _cmd_basis(session):
    cfg = session.config
    spec = session.ideal_spec(cfg.ideal)
    rep = find_basis_representation(session.ring, spec, session.provider)
    result = {
        "orders": list(rep.orders),
        "ideal_order": rep.order(),
        "generators": [session.fmt(h) for h in rep.basis.h],
        "tensor": [[list(cell) for cell in row] for row in rep.tensor],
        "provenance": [str(p) for p in rep.provenance],
        "rounds": rep.trace.rounds,
        "sizes": list(rep.trace.sizes),
    }
    if cfg.debug_codes:
        result["codes"] = [repr(h) for h in rep.basis.h]
    if cfg.verify:
        elems = _brute_context(session)
        closure = verify.ideal_closure(session.ring, spec.generators, spec.side)
        diffs = []
        _check(diffs, "ideal order", rep.order(), len(closure))
        span = verify.additive_span(session.ring, rep.basis.h) if rep.basis.h else None
        if span is not None:
            _check(diffs, "span equals closure", span == closure, True)
        if diffs:
            raise VerificationError(json.dumps(diffs, sort_keys=True))
    human = [
        f"invariant factors: {list(rep.orders)}",
        f"|I| = {rep.order()}",
        f"generators: {[session.fmt(h) for h in rep.basis.h]}",
        f"tensor: {[[list(cell) for cell in row] for row in rep.tensor]}",
        f"augmenting rounds: {rep.trace.rounds}",
    ]
    return result, human, _confidence(session)


def _cmd_order(session):
    cfg = session.config
    spec = session.ideal_spec(cfg.ideal)
    n = ops.ideal_order(session.ring, spec, session.provider)
    if cfg.verify:
        closure = verify.ideal_closure(session.ring, spec.generators, spec.side)
        if n != len(closure):
            raise VerificationError(f"order {n} != brute {len(closure)}")
    return {"order": n}, [f"|I| = {n}"], _confidence(session)


def _cmd_ring_order(session):
    cfg = session.config
    n = ops.ring_order(session.ring, session.provider, session.ring_rep)
    if cfg.verify:
        elems = _brute_context(session)
        if n != len(elems):
            raise VerificationError(f"ring order {n} != brute {len(elems)}")
    return {"order": n}, [f"|R| = {n}"], _confidence(session)


def _cmd_equal(session):
    cfg = session.config
    spec1 = session.ideal_spec(cfg.ideal)
    spec2 = session.ideal_spec(cfg.ideal2, what="--ideal2")
    eq = ops.ideal_equal(session.ring, spec1, spec2, session.provider)
    if cfg.verify:
        c1 = verify.ideal_closure(session.ring, spec1.generators, spec1.side)
        c2 = verify.ideal_closure(session.ring, spec2.generators, spec2.side)
        if eq != (c1 == c2):
            raise VerificationError(f"equal verdict {eq} vs brute {c1 == c2}")
    return {"equal": eq}, [f"I = J: {'yes' if eq else 'no'}"], _confidence(session)


def _cmd_member(session):
    cfg = session.config
    spec = session.ideal_spec(cfg.ideal)
    (x,) = session.parse_elements(cfg.element, "--element")
    inside = ops.ideal_contains(session.ring, spec, x, session.provider)
    if cfg.verify:
        closure = verify.ideal_closure(session.ring, spec.generators, spec.side)
        if inside != (x in closure):
            raise VerificationError(f"member verdict {inside} vs brute {x in closure}")
    return (
        {"member": inside},
        [f"{cfg.element} in I: {'yes' if inside else 'no'}"],
        _confidence(session),
    )


def _cmd_witness(session):
    cfg = session.config
    spec = session.ideal_spec(cfg.ideal)
    (x,) = session.parse_elements(cfg.element, "--element")
    rep = find_basis_representation(session.ring, spec, session.provider)
    w = membership_witness(session.ring, x, spec, rep, session.provider)
    zero = ops.additive_identity(session.ring, session.provider)
    check = w.evaluate(
        session.ring.verification, spec.generators, session.ring.generators, zero
    )
    if check != x:
        raise VerificationError("witness re-evaluation mismatch")
    result = {"witness": str(w), "witness_tree": w.to_json(), "verified": True}
    return result, [f"witness: {w}"], _confidence(session)


def _cmd_intersect(session):
    cfg = session.config
    spec1 = session.ideal_spec(cfg.ideal)
    spec2 = session.ideal_spec(cfg.ideal2, what="--ideal2")
    rep = ops.ideal_intersection(
        session.ring, spec1, spec2, session.provider, session.ring_rep
    )
    if cfg.verify:
        c1 = verify.ideal_closure(session.ring, spec1.generators, spec1.side)
        c2 = verify.ideal_closure(session.ring, spec2.generators, spec2.side)
        want = c1 & c2
        got = (
            verify.additive_span(session.ring, rep.basis.h)
            if rep.basis.h
            else frozenset({verify.find_zero(session.ring, _brute_context(session))})
        )
        if got != want:
            raise VerificationError("intersection set mismatch")
    result = {
        "orders": list(rep.orders),
        "order": rep.order(),
        "generators": [session.fmt(h) for h in rep.basis.h],
        "tensor": [[list(cell) for cell in row] for row in rep.tensor],
    }
    return result, [f"|I ∩ J| = {rep.order()}"], _confidence(session)


def _cmd_colon(session):
    cfg = session.config
    spec1 = session.ideal_spec(cfg.ideal)
    spec2 = session.ideal_spec(cfg.ideal2, what="--ideal2")
    codes, basis = ops.colon_ideal(
        session.ring, spec1, spec2, session.provider, session.ring_rep
    )
    if cfg.verify:
        elems = _brute_context(session)
        c1 = verify.ideal_closure(session.ring, spec1.generators, spec1.side)
        c2 = verify.ideal_closure(session.ring, spec2.generators, spec2.side)
        want = verify.colon_set(session.ring, c1, c2, elems)
        got = verify.additive_span(session.ring, codes)
        if got != want:
            raise VerificationError("colon set mismatch")
    result = {
        "generators": [session.fmt(c) for c in codes],
        "orders": list(basis.s),
        "order": basis.order(),
    }
    return result, [f"|(I : J)| = {basis.order()}"], _confidence(session)


def _cmd_annihilate(session):
    cfg = session.config
    s_elems = session.parse_elements(cfg.elements or cfg.element, "--elements")
    side = session.side("left")
    if side == "two":
        raise ParseError("annihilate is one-sided; use --side left|right")
    codes, basis = ops.annihilator(
        session.ring, s_elems, side, session.provider, session.ring_rep
    )
    if cfg.verify:
        elems = _brute_context(session)
        want = verify.annihilator_set(session.ring, s_elems, side, elems)
        got = verify.additive_span(session.ring, codes)
        if got != want:
            raise VerificationError("annihilator set mismatch")
    result = {
        "generators": [session.fmt(c) for c in codes],
        "orders": list(basis.s),
        "order": basis.order(),
    }
    return result, [f"|A_S| = {basis.order()}"], _confidence(session)


def _cmd_unit(session):
    cfg = session.config
    (x,) = session.parse_elements(cfg.element, "--element")
    verdict = ops.is_unit(session.ring, x, session.provider, session.ring_rep)
    if cfg.verify:
        elems = _brute_context(session)
        table = verify.unit_table(session.ring, elems)
        if verdict != (x in table):
            raise VerificationError("unit verdict mismatch")
    return (
        {"unit": verdict},
        [f"{cfg.element} is a unit: {'yes' if verdict else 'no'}"],
        _confidence(session),
    )


def _cmd_inverse(session):
    cfg = session.config
    (x,) = session.parse_elements(cfg.element, "--element")
    inv = ops.inverse(session.ring, x, session.provider, session.ring_rep)
    if cfg.verify:
        elems = _brute_context(session)
        table = verify.unit_table(session.ring, elems)
        if table.get(x) != inv:
            raise VerificationError("inverse mismatch")
    return (
        {"inverse": session.fmt(inv)},
        [f"inverse: {session.fmt(inv)}"],
        _confidence(session),
    )


def _cmd_one(session):
    cfg = session.config
    e = ops.multiplicative_identity(session.ring, session.provider, session.ring_rep)
    if cfg.verify:
        elems = _brute_context(session)
        if e != verify.find_one(session.ring, elems):
            raise VerificationError("identity mismatch")
    return {"one": session.fmt(e)}, [f"1 = {session.fmt(e)}"], _confidence(session)


def _cmd_zero(session):
    cfg = session.config
    z = ops.additive_identity(session.ring, session.provider)
    if cfg.verify:
        elems = _brute_context(session)
        if z != verify.find_zero(session.ring, elems):
            raise VerificationError("zero mismatch")
    return {"zero": session.fmt(z)}, [f"0 = {session.fmt(z)}"], _confidence(session)


def _cmd_neg(session):
    cfg = session.config
    (x,) = session.parse_elements(cfg.element, "--element")
    y = ops.additive_inverse(session.ring, x, session.provider)
    if cfg.verify:
        elems = _brute_context(session)
        zero = verify.find_zero(session.ring, elems)
        if session.ring.verification.add(x, y) != zero:
            raise VerificationError("negation mismatch")
    return {"neg": session.fmt(y)}, [f"-x = {session.fmt(y)}"], _confidence(session)


def _cmd_solve(session):
    cfg = session.config
    (a,) = session.parse_elements(cfg.a, "--a")
    (b,) = session.parse_elements(cfg.b, "--b")
    x = ops.solve_linear(session.ring, a, b, session.provider, session.ring_rep)
    if cfg.verify:
        elems = _brute_context(session)
        sols = verify.solve_linear_set(session.ring, a, b, elems)
        if (x is None) != (not sols) or (x is not None and x not in sols):
            raise VerificationError("solve mismatch")
    if x is None:
        return {"solution": None}, ["no solution"], _confidence(session)
    return (
        {"solution": session.fmt(x)},
        [f"x = {session.fmt(x)}"],
        _confidence(session),
    )


def _cmd_prime(session):
    cfg = session.config
    spec = session.ideal_spec(cfg.ideal, side_default="two")
    verdict = ops.is_prime_ideal(
        session.ring,
        spec,
        session.provider,
        session.ring_rep,
        use_period_finding=cfg.prime_period_finding,
    )
    if cfg.verify:
        elems = _brute_context(session)
        closure = verify.ideal_closure(session.ring, spec.generators, "two")
        want = verify.is_prime_by_definition(session.ring, closure, elems)
        if verdict.prime != want:
            raise VerificationError(f"prime verdict {verdict.prime} vs brute {want}")
    result = {
        "verdict": verdict.verdict,
        "trials": verdict.trials,
        "confidence": verdict.confidence,
    }
    return (
        result,
        [f"verdict: {verdict.verdict} (trials {verdict.trials})"],
        _confidence(session, {"prime_confidence": verdict.confidence}),
    )


def _cmd_hom_kernel(session):
    cfg = session.config
    rho = session.hom_oracle()
    codes, basis = ops.hom_kernel(rho, session.provider, session.ring_rep)
    if cfg.verify:
        elems = _brute_context(session)
        want = frozenset(
            c for c in elems if rho(c) == rho(verify.find_zero(session.ring, elems))
        )
        got = verify.additive_span(session.ring, codes)
        if got != want:
            raise VerificationError("kernel mismatch")
    result = {
        "generators": [session.fmt(c) for c in codes],
        "orders": list(basis.s),
        "order": basis.order(),
    }
    return result, [f"|ker| = {basis.order()}"], _confidence(session)


def _cmd_hom_injective(session):
    rho = session.hom_oracle()
    verdict = ops.is_injective(rho, session.provider, session.ring_rep)
    if session.config.verify:
        elems = _brute_context(session)
        images = {}
        inj = True
        for c in elems:
            img = rho(c)
            if img in images:
                inj = False
                break
            images[img] = c
        if verdict != inj:
            raise VerificationError("injectivity mismatch")
    return (
        {"injective": verdict},
        [f"injective: {'yes' if verdict else 'no'}"],
        _confidence(session),
    )


def _cmd_hom_surjective(session):
    rho = session.hom_oracle()
    verdict = ops.is_surjective(rho, session.provider)
    if session.config.verify:
        elems = _brute_context(session)
        images = {rho(c) for c in elems}
        want = images == set(verify.ring_elements(session.ring2))
        if verdict != want:
            raise VerificationError("surjectivity mismatch")
    return (
        {"surjective": verdict},
        [f"surjective: {'yes' if verdict else 'no'}"],
        _confidence(session),
    )


def bench_queries(config: RunConfig):
    """Query-count table for find_basis_representation over a ring family,
    with the brute-force enumeration channel as the comparator column."""
    rows = []
    for k in range(config.k_min, config.k_max + 1):
        if config.family == "modular":
            spec = ModularSpec(1 << k)
        else:
            spec = MatrixSpec(2, ModularSpec(1 << k))
        if spec.order() > DESK_CAP:
            raise PreconditionError(
                f"family member at k={k} exceeds the desk cap; lower --k-max"
            )
        ring = make_ring(spec, config.seed)
        provider = PrimitiveProvider(
            ProviderConfig(
                backend=config.backend,
                epsilon=config.epsilon,
                seed=fork_seed(config.seed, f"bench-{k}"),
            )
        )
        find_basis_representation(
            ring, IdealSpec("left", ring.generators), provider
        )
        add_n, mul_n = ring.ledger.snapshot()
        brute_force_enumerate(ring)
        vadd, vmul = ring.verification_ledger.snapshot()
        rows.append(
            {
                "k": k,
                "add": add_n,
                "mul": mul_n,
                "total": add_n + mul_n,
                "brute_add": vadd,
                "brute_mul": vmul,
                "brute_total": vadd + vmul,
            }
        )
    exponent = fit_exponent([r["k"] for r in rows], [max(1, r["total"]) for r in rows])
    return rows, exponent


def fit_exponent(ks, totals) -> float:
    """Least-squares slope of log(total) against log(k)."""
    if len(ks) < 2:
        return 0.0
    xs = [math.log(k) for k in ks]
    ys = [math.log(t) for t in totals]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    denom = sum((x - mx) ** 2 for x in xs)
    if denom == 0:
        return 0.0
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / denom


def _cmd_bench(session):
    rows, exponent = bench_queries(session.config)
    human = ["k  add  mul  total  brute_total"]
    for r in rows:
        human.append(
            f"{r['k']:>2} {r['add']:>5} {r['mul']:>4} {r['total']:>6} {r['brute_total']:>11}"
        )
    human.append(f"fitted exponent: {exponent:.3f}")
    return (
        {"rows": rows, "fitted_exponent": exponent},
        human,
        {"backend": session.config.backend, "bound": 1.0, "decisions": 0},
    )


_HANDLERS = {
    "basis": _cmd_basis,
    "order": _cmd_order,
    "ring-order": _cmd_ring_order,
    "equal": _cmd_equal,
    "member": _cmd_member,
    "witness": _cmd_witness,
    "intersect": _cmd_intersect,
    "colon": _cmd_colon,
    "annihilate": _cmd_annihilate,
    "unit": _cmd_unit,
    "inverse": _cmd_inverse,
    "one": _cmd_one,
    "zero": _cmd_zero,
    "neg": _cmd_neg,
    "solve": _cmd_solve,
    "prime": _cmd_prime,
    "hom-kernel": _cmd_hom_kernel,
    "hom-injective": _cmd_hom_injective,
    "hom-surjective": _cmd_hom_surjective,
    "bench-queries": _cmd_bench,
}


def render(report, human_lines, config: RunConfig) -> str:
    if config.json_out:
        return json.dumps(report, sort_keys=True, indent=2)
    lines = list(human_lines)
    if config.count_queries and report.get("queries"):
        q = report["queries"]
        lines.append(
            f"queries: add={q['add']} mul={q['mul']} "
            f"(verification: add={q['verification_add']} mul={q['verification_mul']})"
        )
    for w in report.get("warnings", ()):
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = config_from_args(argv)
    except SystemExit as exc:  # argparse reports its own parse errors
        return 2 if exc.code else 0
    try:
        code, report, human = run(config)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (PreconditionError, MembershipError) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return 3
    except LowConfidenceError as exc:
        print(f"low-confidence result: {exc}", file=sys.stderr)
        return 4
    except VerificationError as exc:
        print(f"verification divergence: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    print(render(report, human, config))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
