"""Command-line front end.

Exit codes: 0 success / certified, 1 internal defect, 2 parse error,
3 theorem-inapplicable input, 4 failed verification or failed model check.
Given the same flags (including --seed) the output is byte-identical
across runs: nothing here consults time, environment, or hash order.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import dieudonne, vanish, wittvec
from .derham import PresentedRing, top_form_is_zero_in_omega, top_form_presentation
from .polyring import Ideal, Polynomial, PolyParseError, PolyRing, TermOrder, parse_polynomial

EXIT_OK = 0
EXIT_DEFECT = 1
EXIT_PARSE = 2
EXIT_INAPPLICABLE = 3
EXIT_VERIFY = 4

PRESETS = {
    "cusp": (("x", "y"), ["y^2 - x^3"]),
    "node": (("x", "y"), ["x*y"]),
    "plane": (("x", "y"), []),
}


@dataclass(frozen=True)
class SessionConfig:
    p: int
    coeff_exp: int
    order: str
    seed: int
    fmt: str

    def __post_init__(self) -> None:
        if not 2 <= self.p < 2 ** 16:
            raise ValueError("p must satisfy 2 <= p < 2^16")
        if self.coeff_exp < 1:
            raise ValueError("coefficient exponent must be >= 1")


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, default=5, help="prime characteristic (default 5)")
    parser.add_argument("--coeff-exp", type=int, default=1, help="coefficient exponent N")
    parser.add_argument("--order", choices=["lex", "grevlex"], default="grevlex")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized drivers")
    parser.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="built-in presentation")
    parser.add_argument("--ring", help="presentation JSON, or '-' to read from stdin")


def _config(args: argparse.Namespace) -> SessionConfig:
    return SessionConfig(args.p, args.coeff_exp, args.order, args.seed, args.fmt)


def _term_order(config: SessionConfig, nvars: int) -> TermOrder:
    return TermOrder.lex(nvars) if config.order == "lex" else TermOrder.grevlex(nvars)


def _load_ring(args: argparse.Namespace, config: SessionConfig) -> PresentedRing:
    if args.ring:
        text = sys.stdin.read() if args.ring == "-" else args.ring
        doc = json.loads(text)
        base = PresentedRing.from_json(doc)
        return PresentedRing.make(
            base.ring, base.ideal.generators, _term_order(config, base.ring.nvars)
        )
    if args.preset:
        names, gens = PRESETS[args.preset]
        ring = PolyRing(config.p, names)
        return PresentedRing.make(
            ring, [parse_polynomial(g, ring) for g in gens], _term_order(config, ring.nvars)
        )
    raise PolyParseError("no presentation given (use --ring or --preset)", 0)


def _emit(config: SessionConfig, text_lines: list[str], json_doc) -> None:
    if config.fmt == "json":
        print(json.dumps(json_doc, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _ideal_lines(ideal: Ideal) -> list[str]:
    if not ideal.basis:
        return ["(0)"]
    return [g.to_text(ideal.basis_order) for g in ideal.basis]


# -- witt -------------------------------------------------------------------


def _witt_domain(args: argparse.Namespace, config: SessionConfig):
    if args.integer:
        return wittvec.IntegerCoefficients()
    if args.ring or args.preset:
        presentation = _load_ring(args, config)
    else:
        presentation = PresentedRing.make(PolyRing(config.p, ()), [])
    return wittvec.PresentedCoefficients(presentation)


def _parse_witt_operand(text, domain, config: SessionConfig) -> wittvec.WittVector:
    if not text:
        raise PolyParseError("missing Witt operand (use --x / --y)", 0)
    coords = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if isinstance(domain, wittvec.IntegerCoefficients):
            coords.append(int(chunk))
        else:
            ring = domain.presentation.ring
            coords.append(domain.presentation.normal(parse_polynomial(chunk, ring)))
    return wittvec.witt_vector(domain, config.p, coords)


def _render_witt(x: wittvec.WittVector, config: SessionConfig) -> tuple[list[str], dict]:
    doc = wittvec.witt_to_json(x)
    if isinstance(x.domain, wittvec.IntegerCoefficients):
        line = "(" + ", ".join(str(c) for c in x.coords) + ")"
    else:
        line = "(" + ", ".join(c.to_text() for c in x.coords) + ")"
    return [line], doc


def cmd_witt(args: argparse.Namespace) -> int:
    config = _config(args)
    domain = _witt_domain(args, config)
    op = args.operation
    if op in ("add", "mul"):
        x = _parse_witt_operand(args.x, domain, config)
        y = _parse_witt_operand(args.y, domain, config)
        result = wittvec.witt_add(x, y) if op == "add" else wittvec.witt_mul(x, y)
    elif op == "neg":
        result = wittvec.witt_neg(_parse_witt_operand(args.x, domain, config))
    elif op == "frobenius":
        result = wittvec.frobenius(_parse_witt_operand(args.x, domain, config))
    elif op == "verschiebung":
        result = wittvec.verschiebung(_parse_witt_operand(args.x, domain, config))
    elif op == "teich":
        if not args.g:
            raise PolyParseError("teich needs --g", 0)
        if isinstance(domain, wittvec.IntegerCoefficients):
            g = int(args.g)
        else:
            g = domain.presentation.normal(parse_polynomial(args.g, domain.presentation.ring))
        result = wittvec.teichmuller(domain, g, args.level, p=config.p)
    elif op == "ghost":
        x = _parse_witt_operand(args.x, domain, config)
        values = wittvec.ghost(x)
        _emit(config, ["(" + ", ".join(str(v) for v in values) + ")"], {"ghost": list(values)})
        return EXIT_OK
    elif op == "check-frobenius":
        if isinstance(domain, wittvec.IntegerCoefficients):
            raise PolyParseError("check-frobenius needs an F_p-algebra ring", 0)
        if not args.g:
            raise PolyParseError("check-frobenius needs --g", 0)
        presentation = domain.presentation
        g = presentation.normal(parse_polynomial(args.g, presentation.ring))
        r = args.level
        lift = wittvec.teichmuller(domain, g, r, p=config.p)
        f_of_lift = wittvec.frobenius(lift)
        lift_of_power = wittvec.teichmuller(domain, presentation.normal(g ** config.p), r - 1, p=config.p)
        power_of_lift = wittvec.witt_one(domain, config.p, r)
        for _ in range(config.p):
            power_of_lift = wittvec.witt_mul(power_of_lift, lift)
        truncated_power = wittvec.WittVector(config.p, r - 1, domain, power_of_lift.coords[: r - 1])
        ok = f_of_lift == lift_of_power == truncated_power
        _emit(
            config,
            [f"F([g]) == [g^p] == [g]^p: {str(ok).lower()}"],
            {"holds": ok, "g": g.to_json()},
        )
        return EXIT_OK if ok else EXIT_VERIFY
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(op)
    lines, doc = _render_witt(result, config)
    _emit(config, lines, doc)
    return EXIT_OK


# -- certified vanishing ------------------------------------------------------


def cmd_certify(args: argparse.Namespace) -> int:
    config = _config(args)
    if args.verify:
        with open(args.verify, "r", encoding="utf-8") as fh:
            cert = vanish.VanishingCertificate.from_json(json.load(fh))
        ok = vanish.verify_certificate(cert)
        _emit(config, [f"verified: {str(ok).lower()}"], {"verified": ok})
        return EXIT_OK if ok else EXIT_VERIFY
    presentation = _load_ring(args, config)
    cert = vanish.certify_top_vanishing(presentation)
    ok = vanish.verify_certificate(cert)
    doc = cert.to_json()
    doc["verified"] = ok
    lines = [f"seed: {cert.seed.to_text()}"]
    for s in cert.steps:
        label = f"partial d/d{cert.presentation.ring.names[s.var]}" if s.op == "partial" else "pth-root"
        lines.append(f"  {label}: {s.before.to_text()} -> {s.after.to_text()}")
    lines.append(f"terminal: {cert.terminal}")
    lines.append(f"verified: {str(ok).lower()}")
    _emit(config, lines, doc)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_closure(args: argparse.Namespace) -> int:
    config = _config(args)
    presentation = _load_ring(args, config)
    state = vanish.closure_state(presentation.ideal)
    lines = ["closure basis:"] + ["  " + t for t in _ideal_lines(state.ideal)]
    lines.append(f"generations: {state.generations}")
    _emit(
        config,
        lines,
        {
            "basis": [g.to_json() for g in state.ideal.basis or ()],
            "generations": state.generations,
            "fixpoint": state.fixpoint,
        },
    )
    return EXIT_OK


def cmd_kernel(args: argparse.Namespace) -> int:
    config = _config(args)
    presentation = _load_ring(args, config)
    elements = [
        presentation.normal(parse_polynomial(chunk.strip(), presentation.ring))
        for chunk in args.elements.split(",")
    ]
    kernel = vanish.kernel_of_tuple(presentation, elements)
    _emit(
        config,
        ["kernel basis:"] + ["  " + t for t in _ideal_lines(kernel)],
        {"vars": list(kernel.ring.names), "basis": [g.to_json() for g in kernel.basis or ()]},
    )
    return EXIT_OK


def cmd_dim(args: argparse.Namespace) -> int:
    config = _config(args)
    presentation = _load_ring(args, config)
    bound = vanish.vanishing_degree_bound(presentation)
    _emit(config, [str(bound)], {"dimension": bound})
    return EXIT_OK


def cmd_omega_top(args: argparse.Namespace) -> int:
    config = _config(args)
    presentation = _load_ring(args, config)
    top = top_form_presentation(presentation)
    lines = ["top-form presentation ideal:"] + ["  " + t for t in _ideal_lines(top.jacobian_ideal)]
    doc = {"jacobian_basis": [g.to_json() for g in top.jacobian_ideal.basis or ()]}
    if args.coeff:
        c = parse_polynomial(args.coeff, presentation.ring)
        vanishes = top_form_is_zero_in_omega(c, top)
        lines.append(f"coefficient kills the top form: {str(vanishes).lower()}")
        doc["coefficient_vanishes"] = vanishes
    _emit(config, lines, doc)
    return EXIT_OK


# -- dieudonne models ---------------------------------------------------------


def _load_model(args: argparse.Namespace, config: SessionConfig) -> dieudonne.DieudonneModel:
    if args.model_file:
        return dieudonne.model_from_json_file(args.model_file)
    name = args.model or "a1"
    exponent = max(config.coeff_exp, 2)
    if name == "a1":
        return dieudonne.a1_model(config.p, args.wmax, exponent, depth=args.vdepth)
    if name == "trivial":
        return dieudonne.trivial_model(config.p, exponent)
    if name == "zero":
        return dieudonne.zero_model(config.p, exponent)
    raise PolyParseError(f"unknown model {name!r}", 0)


def cmd_dieudonne_check(args: argparse.Namespace) -> int:
    config = _config(args)
    model = _load_model(args, config)
    reports = [dieudonne.check_axioms(model), dieudonne.saturation_witness(model)]
    for r in range(1, args.r + 1):
        reports.append(dieudonne.f_cancellation_check(model, r))
        for degree in model.degrees():
            reports.append(dieudonne.compare_wr_with_cohomology(model, degree, r))
    rmax = min(args.rmax, model.exponent - 1) if model.exponent > 1 else 0
    if rmax >= 1:
        for degree in model.degrees():
            reports.append(dieudonne.w1_vanishing_propagation_check(model, degree, rmax))
    if all(b.degree >= 0 for b in model.basis):
        reports.append(dieudonne.frobenius_injectivity_degree0_check(model))
    lines = [r.summary() for r in reports]
    passed = all(r.passed for r in reports)
    lines.append(f"overall: {'pass' if passed else 'FAIL'}")
    _emit(config, lines, {"reports": [r.to_json() for r in reports], "passed": passed})
    return EXIT_OK if passed else EXIT_VERIFY


# -- deterministic battery ----------------------------------------------------


def _random_nonzero_ideal(rng: random.Random, ring: PolyRing) -> Ideal:
    gens = []
    for _ in range(rng.randint(1, 2)):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            exp = tuple(rng.randint(0, 2) for _ in range(ring.nvars))
            terms[exp] = rng.randint(1, ring.p - 1)
        gens.append(Polynomial(ring, terms))
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        gens = [ring.variable(0)]
    return Ideal.from_polys(ring, gens)


def cmd_battery(args: argparse.Namespace) -> int:
    config = _config(args)
    rng = random.Random(config.seed)
    print(f"battery seed={config.seed} p={config.p}")
    for name in sorted(PRESETS):
        names, gen_texts = PRESETS[name]
        ring = PolyRing(config.p, names)
        presentation = PresentedRing.make(ring, [parse_polynomial(t, ring) for t in gen_texts])
        bound = vanish.vanishing_degree_bound(presentation)
        print(f"[{name}] degree bound: {bound}")
        if presentation.ideal.basis:
            cert = vanish.certify_top_vanishing(presentation)
            ok = vanish.verify_certificate(cert)
            chain = ", ".join(
                f"{s.op}({s.var if s.var is not None else ''})" for s in cert.steps
            )
            print(f"[{name}] certificate: seed={cert.seed.to_text()} steps=[{chain}] "
                  f"terminal={cert.terminal} verified={str(ok).lower()}")
            closure = vanish.differential_p_closure(presentation.ideal)
            print(f"[{name}] closure: {'(1)' if closure.contains_one() else 'proper'}")
        else:
            print(f"[{name}] certificate: inapplicable (zero ideal)")
    ring = PolyRing(config.p, ("x", "y"))
    for i in range(4):
        ideal = _random_nonzero_ideal(rng, ring)
        presentation = PresentedRing.make(ring, ideal.generators)
        if presentation.is_unit_ideal() or presentation.is_zero_ideal():
            print(f"[random {i}] degenerate presentation, skipped")
            continue
        cert = vanish.certify_top_vanishing(presentation)
        ok = vanish.verify_certificate(cert)
        print(f"[random {i}] gens={[g.to_text() for g in ideal.generators]} "
              f"len={len(cert.steps)} verified={str(ok).lower()}")
    domain = wittvec.IntegerCoefficients()
    x = wittvec.witt_vector(domain, 2, [rng.randint(0, 9) for _ in range(3)])
    y = wittvec.witt_vector(domain, 2, [rng.randint(0, 9) for _ in range(3)])
    s = wittvec.witt_add(x, y)
    print(f"witt ghost add: {wittvec.ghost(x)} + {wittvec.ghost(y)} = {wittvec.ghost(s)}")
    model = dieudonne.a1_model(2, 4, 3)
    for report in (
        dieudonne.check_axioms(model),
        dieudonne.saturation_witness(model),
        dieudonne.f_cancellation_check(model, 1),
        dieudonne.compare_wr_with_cohomology(model, 0, 1),
        dieudonne.compare_wr_with_cohomology(model, 1, 1),
    ):
        print("a1(p=2,wmax=4,N=3) " + report.summary())
    return EXIT_OK


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wittcert", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    witt = sub.add_parser("witt", help="truncated Witt vector arithmetic")
    _common_flags(witt)
    witt.add_argument(
        "operation",
        choices=["add", "mul", "neg", "frobenius", "verschiebung", "teich", "ghost", "check-frobenius"],
    )
    witt.add_argument("--level", type=int, default=2, help="truncation level r")
    witt.add_argument("--integer", action="store_true", help="integer-coefficient oracle mode")
    witt.add_argument("--x", help="first operand, coordinates separated by ';'")
    witt.add_argument("--y", help="second operand")
    witt.add_argument("--g", help="ring element for teich / check-frobenius")

    certify = sub.add_parser("certify", help="certify top-form vanishing")
    _common_flags(certify)
    certify.add_argument("--verify", help="verify an existing certificate JSON file")

    closure = sub.add_parser("closure", help="differential p-closure of the ideal")
    _common_flags(closure)

    kernel = sub.add_parser("kernel", help="kernel of t_i -> g_i")
    _common_flags(kernel)
    kernel.add_argument("--elements", required=True, help="comma-separated ring elements")

    dim = sub.add_parser("dim", help="vanishing degree bound (Krull dimension)")
    _common_flags(dim)

    omega = sub.add_parser("omega-top", help="top-form presentation ideal")
    _common_flags(omega)
    omega.add_argument("--coeff", help="test whether this coefficient kills the top form")

    check = sub.add_parser("dieudonne-check", help="run the Dieudonne model checkers")
    _common_flags(check)
    check.add_argument("--model", choices=["a1", "trivial", "zero"], help="built-in model")
    check.add_argument("--model-file", help="model JSON file")
    check.add_argument("--wmax", type=int, default=4)
    check.add_argument("--vdepth", type=int, default=None)
    check.add_argument("--r", type=int, default=1, help="levels to check (1..r)")
    check.add_argument("--rmax", type=int, default=2, help="propagation depth")

    battery = sub.add_parser("battery", help="deterministic demonstration transcript")
    _common_flags(battery)

    return parser


HANDLERS = {
    "witt": cmd_witt,
    "certify": cmd_certify,
    "closure": cmd_closure,
    "kernel": cmd_kernel,
    "dim": cmd_dim,
    "omega-top": cmd_omega_top,
    "dieudonne-check": cmd_dieudonne_check,
    "battery": cmd_battery,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except (PolyParseError, json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except vanish.InapplicableError as exc:
        print(f"inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (vanish.InternalDefectError, vanish.ClosureBudgetError) as exc:
        print(f"internal defect: {exc}", file=sys.stderr)
        return EXIT_DEFECT
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
