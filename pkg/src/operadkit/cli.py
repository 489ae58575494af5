"""Command-line frontend.

Exit codes: 0 when the requested check passes, 1 for a negative verdict
(non-confluence, a failing relation check), 2 for unreadable or invalid input.
Presentation arguments accept a path or ``preset:NAME``; algebra and
bicomplex arguments accept a path or ``builtin:NAME`` for the bundled data.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import trees as T
from .koszul_dual import koszul_dual_presentation
from .presentation import PRESETS, Presentation, load_presentation, parse_polynomial, preset
from .rewriting import (RewriteSystem, check_confluence, enumerate_pbw_basis, reduce_normal_form,
                        reduction_dot)

SCHEMA_VERSION = 1


class InputError(Exception):
    pass


@dataclass
class CommandResult:
    code: int
    summary: str
    payload_path: str | None = None
    lines: list[str] = field(default_factory=list)


# -- input helpers --------------------------------------------------------------

def _load_opd(source: str) -> Presentation:
    if source.startswith("preset:"):
        return preset(source.split(":", 1)[1])
    return load_presentation(source)


def _data_path(source: str) -> Path | str:
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        ref = resources.files("operadkit") / "data" / f"{name}.json"
        if not ref.is_file():
            raise InputError(f"no bundled data named {name!r}")
        return Path(str(ref))
    return source


def _load_json(source: str) -> dict:
    with open(_data_path(source), encoding="utf-8") as fh:
        return json.load(fh)


def _write_payload(path: str | None, payload: dict) -> str | None:
    if not path:
        return None
    body = dict(payload)
    body["schema_version"] = SCHEMA_VERSION
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(body, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    return path


# -- rewriting commands -----------------------------------------------------------

def cmd_check_koszul(args) -> CommandResult:
    pres = _load_opd(args.source)
    sys_ = RewriteSystem.from_presentation(pres)
    cert = check_confluence(sys_)
    rank = sys_.rank
    lines = [f"operad {pres.name} ({pres.mode})"]
    lines += ["rule: " + r.rule_text(rank) for r in sys_.rules]
    for k, g in enumerate(cert.graphs, start=1):
        forms = g.normal_forms()
        status = "confluent" if len(forms) == 1 else f"{len(forms)} normal forms"
        lines.append(f"critical monomial {k}: {T.to_text(g.start)} ({status})")
        if len(forms) > 1:
            lines += [f"  normal form: {p.to_text(rank)}" for p in forms]
    if args.emit_diagram:
        out = Path(args.emit_diagram)
        out.mkdir(parents=True, exist_ok=True)
        for k, g in enumerate(cert.graphs, start=1):
            (out / f"critical_{k}.dot").write_text(reduction_dot(g, rank, f"critical_{k}"),
                                                   encoding="utf-8")
        lines.append(f"wrote {len(cert.graphs)} diagram(s) to {out}")
    summary = cert.summary()
    path = _write_payload(args.json, {"command": "check-koszul", **cert.to_json(), "summary": summary})
    return CommandResult(0 if cert.confluent else 1, summary, path, lines)


def cmd_koszul_dual(args) -> CommandResult:
    pres = _load_opd(args.source)
    dual = koszul_dual_presentation(pres)
    text = dual.to_opd()
    lines = []
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        lines.append(f"wrote {args.out}")
    else:
        lines.append(text.rstrip("\n"))
    summary = f"Koszul dual of {pres.name}: {dual.name} with {len(dual.relators)} relator(s)"
    path = _write_payload(args.json, {"command": "koszul-dual", "operad": pres.name,
                                      "dual": dual.name, "opd": text})
    return CommandResult(0, summary, path, lines)


def cmd_pbw(args) -> CommandResult:
    pres = _load_opd(args.source)
    if not 1 <= args.max_arity <= 8:
        raise InputError("--max-arity must lie between 1 and 8")
    sys_ = RewriteSystem.from_presentation(pres)
    cert = check_confluence(sys_)
    if not cert.confluent:
        return CommandResult(1, "not confluent: " + cert.summary(), None,
                             [f"critical monomial: {T.to_text(g.start)}" for g in cert.graphs
                              if len(g.normal_forms()) > 1])
    lines, table = [], {}
    for n in range(1, args.max_arity + 1):
        basis = enumerate_pbw_basis(sys_, n, cert)
        table[str(n)] = [T.to_text(m) for m in basis]
        lines.append(f"arity {n}: {len(basis)}")
        if args.list:
            lines += ["  " + T.to_text(m) for m in basis]
    counts = ", ".join(str(len(table[str(n)])) for n in range(1, args.max_arity + 1))
    path = _write_payload(args.json, {"command": "pbw", "operad": pres.name, "basis": table})
    return CommandResult(0, f"PBW basis sizes for arities 1..{args.max_arity}: {counts}", path, lines)


def cmd_reduce(args) -> CommandResult:
    pres = _load_opd(args.source)
    sys_ = RewriteSystem.from_presentation(pres)
    poly = parse_polynomial(args.expr, pres)
    nf = reduce_normal_form(poly, sys_)
    text = nf.to_text(sys_.rank)
    path = _write_payload(args.json, {"command": "reduce", "operad": pres.name,
                                      "input": poly.to_text(sys_.rank), "normal_form": text})
    return CommandResult(0, text, path, [])


def cmd_preset(args) -> CommandResult:
    text = preset(args.name).to_opd()
    return CommandResult(0, text.rstrip("\n"), None, [])


# -- homotopy transfer commands ---------------------------------------------------

def _term(c: str, name: str) -> str:
    return {"1": name, "-1": "-" + name}.get(c, f"{c}*{name}")


def _table_lines(label: str, m) -> list[str]:
    out = []
    for e in m.entries():
        terms = " + ".join(_term(c, t) for t, c in e["output"].items()).replace("+ -", "- ")
        out.append(f"  {label}({', '.join(e['inputs'])}) = {terms}")
    return out


def cmd_transfer(args) -> CommandResult:
    from .htt.linfinity import antisymmetrize_linfinity, check_linfinity_relations, check_shuffle_vanishing
    from .htt.massey import formality_report, massey_triple
    from .htt.structures import DgAlgebra, check_ainfinity_relations, check_morphism_relations
    from .htt.transfer import transfer_with_morphism

    alg = DgAlgebra.from_json(_load_json(args.algebra))
    n = args.max_arity
    if not 2 <= n <= 8:
        raise InputError("--max-arity must lie between 2 and 8")
    s, iota, r = transfer_with_morphism(alg, max_arity=n, verify=False)
    H = r.small.space
    lines = ["homology basis: " + ", ".join(f"{b} (degree {d})" for b, d in zip(H.basis, H.degrees))]
    for k in range(2, n + 1):
        lines.append(f"mu_{k}:" + ("" if s.op(k).table else " 0"))
        lines += _table_lines(f"mu_{k}", s.op(k))
    reports = [check_ainfinity_relations(s, n), check_morphism_relations(iota, min(n, 4))]
    payload = {"command": "transfer", "structure": s.with_checked(n).to_json(),
               "morphism_components": {str(k): iota.component(k).to_json() for k in range(1, n + 1)}}
    if args.check_shuffles:
        reports.append(check_shuffle_vanishing(s, n))
    if args.linfinity:
        ell = antisymmetrize_linfinity(s.with_checked(n))
        reports.append(check_linfinity_relations(ell, min(n, 4)))
        payload["linfinity"] = ell.to_json()
    lines += [rep.summary() for rep in reports]
    formal = formality_report(s, n)
    lines.append(formal.summary())
    payload["reports"] = [rep.to_json() for rep in reports]
    payload["formality"] = formal.to_json()
    ok = all(rep.passed for rep in reports)
    if args.massey:
        res = massey_triple(alg, *args.massey, r=r)
        rep_txt = _vec_text(res.representative, H)
        mu_txt = _vec_text(res.mu3, H)
        lines.append(f"Massey <{', '.join(res.classes)}>: representative {rep_txt}, "
                     f"indeterminacy dimension {res.indeterminacy_dimension(H.dim)}")
        lines.append(f"mu_3({', '.join(res.classes)}) = {mu_txt}; "
                     f"{'in' if res.verdict else 'NOT in'} the Massey coset")
        payload["massey"] = {"classes": list(res.classes), "representative": rep_txt,
                             "mu3": mu_txt, "indeterminacy": [_vec_text(v, H) for v in res.indeterminacy],
                             "verdict": res.verdict}
        ok = ok and res.verdict
    summary = "transfer checks pass" if ok else "transfer checks FAIL"
    path = _write_payload(args.json, payload)
    return CommandResult(0 if ok else 1, summary, path, lines)


def _vec_text(v, space) -> str:
    from .linalg import fmt_rational

    if not v:
        return "0"
    return " + ".join(_term(fmt_rational(v[k]), space.basis[k]) for k in sorted(v)).replace("+ -", "- ")


def cmd_multicomplex(args) -> CommandResult:
    from .htt.multicomplex import (Bicomplex, check_dinfinity_relations, second_page_agrees,
                                   transfer_multicomplex)

    b = Bicomplex.from_json(_load_json(args.bicomplex))
    m = b.to_multicomplex()
    t = transfer_multicomplex(m)
    H = t.space
    lines = ["homology basis: " + ", ".join(H.basis)]
    for n in sorted(t.ops):
        lines.append(f"d_{n}:")
        for c, col in enumerate(t.ops[n].columns()):
            if col:
                lines.append(f"  d_{n}({H.basis[c]}) = {_vec_text(col, H)}")
    if not t.ops:
        lines.append("all transferred d_n vanish")
    bad = check_dinfinity_relations(t)
    agrees = second_page_agrees(b, t)
    lines.append("D-infinity relations: " + ("pass" if not bad else f"fail at n = {bad}"))
    lines.append("second page agrees with the zig-zag differential: " + ("yes" if agrees else "no"))
    ok = not bad and agrees
    payload = {"command": "multicomplex", "transferred": t.to_json(),
               "dinfinity_failures": bad, "second_page_agrees": agrees}
    path = _write_payload(args.json, payload)
    return CommandResult(0 if ok else 1, "multicomplex checks pass" if ok else "multicomplex checks FAIL",
                         path, lines)


# -- entry points -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="operadkit", description="Quadratic operads and homotopy transfer")
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="OUT", help="write a machine-readable payload")

    p = sub.add_parser("check-koszul", parents=[common], help="rewriting-method Koszulness check")
    p.add_argument("source", help="FILE.opd or preset:NAME")
    p.add_argument("--emit-diagram", metavar="DIR", help="write one DOT file per critical monomial")
    p.set_defaults(func=cmd_check_koszul)

    p = sub.add_parser("koszul-dual", parents=[common], help="Koszul dual presentation")
    p.add_argument("source")
    p.add_argument("--out", metavar="FILE.opd")
    p.set_defaults(func=cmd_koszul_dual)

    p = sub.add_parser("pbw", parents=[common], help="PBW basis sizes")
    p.add_argument("source")
    p.add_argument("--max-arity", type=int, required=True)
    p.add_argument("--list", action="store_true", help="print the basis monomials")
    p.set_defaults(func=cmd_pbw)

    p = sub.add_parser("reduce", parents=[common], help="normal form of a tree expression")
    p.add_argument("source")
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("transfer", parents=[common], help="transferred A-infinity structure on homology")
    p.add_argument("algebra", help="ALGEBRA.json or builtin:NAME")
    p.add_argument("--max-arity", type=int, default=5)
    p.add_argument("--massey", nargs=3, metavar=("X", "Y", "Z"))
    p.add_argument("--check-shuffles", action="store_true")
    p.add_argument("--linfinity", action="store_true")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("multicomplex", parents=[common], help="transfer a bicomplex to its homology")
    p.add_argument("bicomplex", help="BICOMPLEX.json or builtin:NAME")
    p.set_defaults(func=cmd_multicomplex)

    p = sub.add_parser("preset", help="print a built-in presentation")
    p.add_argument("name", choices=sorted(PRESETS))
    p.set_defaults(func=cmd_preset)
    return ap


# every library error derives from ValueError (JSON decoding errors too)
_INPUT_ERRORS = (InputError, ValueError, OSError, KeyError)


def run(argv: list[str] | None = None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        return CommandResult(2, f"error: {exc}")


def main(argv: list[str] | None = None) -> int:
    try:
        res = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return 2 if exc.code else 0
    for line in res.lines:
        print(line)
    if res.code == 2:
        print(res.summary, file=sys.stderr)
    else:
        print(res.summary)
    if res.payload_path:
        print(f"payload: {res.payload_path}")
    return res.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
