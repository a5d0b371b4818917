"""Command line front end: ``sdw <noun> <verb> ...``.

Exit codes: 0 verified, 1 refuted (a witness is printed), 2 inconclusive
within the stated bounds, 3 input error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

import numpy as np

from . import __version__
from .core import AlgebraError, CapExceeded, save_algebra

VERIFIED, REFUTED, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3
OUTCOME = {VERIFIED: "verified", REFUTED: "refuted", INCONCLUSIVE: "inconclusive", INPUT_ERROR: "input error"}


class InputError(Exception):
    pass


# -- argument helpers ---------------------------------------------------------------

def _algebra(ref: str):
    from .subdirect import resolve_algebra
    return resolve_algebra(ref)


def _int_rows(text: str, width: Optional[int] = None) -> list[list[int]]:
    """``[[0,1],[1,0]]`` or ``0,1;1,0``."""
    text = text.strip()
    if text.startswith("["):
        rows = json.loads(text)
        if rows and not isinstance(rows[0], list):
            rows = [[r] for r in rows]
    else:
        rows = [[int(x) for x in part.split(",") if x.strip()] for part in text.split(";") if part.strip()]
    if width is not None and any(len(r) != width for r in rows):
        raise InputError(f"expected tuples of length {width} in {text!r}")
    return rows


def _pairs(values) -> list[tuple[int, int]]:
    out = []
    for v in values or []:
        for r in _int_rows(v, 2):
            out.append((r[0], r[1]))
    return out


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(";", ",").split(",") if x.strip()]


def _json_file(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def _congruence(ref: str, A):
    from .congruence import Congruence, Partition
    if ref in ("0", "zero"):
        return Congruence.zero(A)
    if ref in ("1", "one"):
        return Congruence.one(A)
    blocks = json.loads(ref) if ref.lstrip().startswith("[") else _json_file(ref)
    if isinstance(blocks, dict):
        blocks = blocks.get("blocks", blocks.get("commutator"))
    return Congruence.checked(A, Partition.from_blocks(A.size, blocks))


def _read_lines(path: str) -> list[str]:
    with open(path) as fh:
        return [ln.split("#", 1)[0].strip() for ln in fh if ln.split("#", 1)[0].strip()]


# -- command handlers: each returns (exit code, payload, bounds) ------------------------------

def cmd_alg_show(a):
    from .reducts import group_reduct, lattice_reduct, ring_reduct
    A = _algebra(a.algebra)
    return VERIFIED, {"name": A.name, "size": A.size,
                      "signature": [[s, n] for s, n in A.signature.symbols],
                      "group_reduct": bool(group_reduct(A)), "ring_reduct": bool(ring_reduct(A)),
                      "lattice_reduct": bool(lattice_reduct(A))}, {}


def cmd_alg_export(a):
    from . import zoo
    A = zoo.named(a.name)
    save_algebra(A, a.output)
    return VERIFIED, {"name": A.name, "size": A.size, "written": a.output}, {}


def cmd_alg_zoo(a):
    from . import zoo
    return VERIFIED, {"groups": list(zoo.GROUP_NAMES), "rings": list(zoo.RING_NAMES),
                      "lattices": ["2", "3", "SL2", "M3", "N5"]}, {}


def cmd_con_lattice(a):
    from .congruence import con_lattice, is_modular
    A = _algebra(a.algebra)
    L = con_lattice(A, cap=a.cap)
    mod = is_modular(L)
    return VERIFIED, {"algebra": A.name, "count": len(L), "congruences": [c.blocks() for c in L.congruences],
                      "covers": [list(c) for c in L.covers()], "modular": mod.ok,
                      "pentagon": None if mod.ok else [int(i) for i in mod.witness]}, {"cap": a.cap}


def cmd_con_cg(a):
    from .congruence import cg
    A = _algebra(a.algebra)
    th = cg(A, _pairs(a.pairs))
    return VERIFIED, {"algebra": A.name, "pairs": [list(p) for p in _pairs(a.pairs)], "congruence": th.blocks()}, {}


def cmd_con_permute(a):
    from .congruence import permute
    A = _algebra(a.algebra)
    t1, t2 = _congruence(a.first, A), _congruence(a.second, A)
    res = permute(t1, t2)
    payload = {"permute": res.ok}
    if not res.ok:
        payload["witness"] = [int(x) for x in res.witness]
    return (VERIFIED if res.ok else REFUTED), payload, {}


def _sub(path):
    from .subdirect import load_subproduct
    return load_subproduct(path)


def cmd_sdp_check(a):
    from .subdirect import is_subdirect
    C = _sub(a.subproduct)
    res = is_subdirect(C)
    payload = {"size": C.size, "subdirect": res.ok}
    if not res.ok:
        payload["witness"] = res.witness
    return (VERIFIED if res.ok else REFUTED), payload, {}


def cmd_sdp_fiber(a):
    from .subdirect import fiber_product
    A, B, D = _algebra(a.left), _algebra(a.right), _algebra(a.onto)
    g = np.asarray(_json_file(a.g) if os.path.exists(a.g) else json.loads(a.g))
    h = np.asarray(_json_file(a.h) if os.path.exists(a.h) else json.loads(a.h))
    C = fiber_product(A, B, g, h, D)
    payload = {"size": C.size, "elements": [list(e) for e in C.elements()]}
    if a.output:
        with open(a.output, "w") as fh:
            json.dump({"factors": [a.left, a.right], "elements": payload["elements"]}, fh)
            fh.write("\n")
        payload["written"] = a.output
    return VERIFIED, payload, {}


def cmd_sdp_pairs(a):
    from .subdirect import pair_report
    C = _sub(a.subproduct)
    rep = pair_report(C)
    return VERIFIED, {"size": C.size, "all_surjective": rep.all_surjective(), "pairs": rep.to_json()}, {}


def cmd_sdp_fleischer(a):
    from .congruence import permute
    from .subdirect import is_fiber_product
    C = _sub(a.subproduct)
    res = is_fiber_product(C)
    pr = permute(C.kernel_partition(0), C.kernel_partition(1))
    payload = {"size": C.size, "fiber_product": res.ok, "kernels_permute": pr.ok}
    if res.ok:
        w = res.witness
        payload["quotient_size"] = w.D.size
        payload["g"] = w.g.tolist()
        payload["h"] = w.h.tolist()
    else:
        payload["witness"] = res.witness
    return (VERIFIED if res.ok else REFUTED), payload, {}


def cmd_sdp_gens(a):
    from .synthesis import greedy_generating_set
    C = _sub(a.subproduct)
    X = greedy_generating_set(C)
    return VERIFIED, {"size": C.size, "generators": [list(x) for x in X]}, {}


def cmd_sdp_lift(a):
    from .synthesis import check_malcev, find_malcev_term, lift_generators
    C = _sub(a.subproduct)
    if a.term:
        term = a.term
    else:
        found = find_malcev_term(C.factors[0], budget=a.budget)
        if found.witness is None:
            return INCONCLUSIVE, {"malcev": found.status}, {"budget": a.budget}
        term = found.witness.term
        if not check_malcev(C.factors[1], term).ok:
            return INCONCLUSIVE, {"malcev": f"{term} fails on the second factor"}, {"budget": a.budget}
    cert = lift_generators(C, _ints(a.gens_a), _ints(a.gens_b), _pairs(a.lambda_pairs), term)
    return (VERIFIED if cert.ok else REFUTED), dict(cert.to_json(), term=str(term)), {"budget": a.budget}


def cmd_sdp_thm41(a):
    from .synthesis import verify_thm41a
    C = _sub(a.subproduct)
    res = verify_thm41a(C)
    payload = {"size": C.size, "union_of_classes": res.ok, "gammas": res.details["gammas"]}
    if not res.ok:
        payload["witness"] = res.witness
    return (VERIFIED if res.ok else REFUTED), payload, {}


def cmd_sdp_certify(a):
    from .synthesis import fg_certificate
    C = _sub(a.subproduct)
    cert = fg_certificate(C, _int_rows(a.gens, C.n_factors))
    return (VERIFIED if cert.ok else REFUTED), cert.to_json(), {}


def cmd_comm_compute(a):
    from .commutator import commutator
    A = _algebra(a.algebra)
    congs = [_congruence(c, A) for c in a.congs]
    res = commutator(A, congs, route=a.route, cap=a.m_cap)
    return VERIFIED, dict(res.to_json(), algebra=A.name), {"M_cap": a.m_cap, "k_cap": 3}


def cmd_comm_class(a):
    from .commutator import supernilpotence_class
    A = _algebra(a.algebra)
    rel = _congruence(a.relative_to, A) if a.relative_to else None
    res = supernilpotence_class(A, relative_to=rel, max_k=a.max_k)
    code = {"class": VERIFIED, "exceeds": REFUTED, "inconclusive": INCONCLUSIVE}[res.status]
    return code, dict(res.to_json(), algebra=A.name), {"max_k": a.max_k, "k_cap": 3}


def cmd_comm_properties(a):
    from .commutator import property_suite
    A = _algebra(a.algebra)
    rep = property_suite(A, k_max=a.max_k)
    return (VERIFIED if rep.ok else REFUTED), rep.to_json(), {"max_k": a.max_k}


def cmd_malcev(a):
    from .synthesis import NONE_FOUND, find_malcev_term
    A = _algebra(a.algebra)
    res = find_malcev_term(A, budget=a.budget, hints=a.hint or ())
    code = VERIFIED if res.witness is not None else REFUTED if res.status == NONE_FOUND else INCONCLUSIVE
    return code, dict(res.to_json(), algebra=A.name), {"budget": a.budget}


def cmd_free_leq(a):
    from .free.lattice import explain_leq, parse_lattice_term
    p, q = parse_lattice_term(a.p), parse_lattice_term(a.q)
    res = explain_leq(p, q)
    return (VERIFIED if res.holds else REFUTED), res.to_json(), {}


def cmd_free_xyz(a):
    from .free.lattice import xyz_claims
    rep = xyz_claims(a.max_n)
    return (VERIFIED if rep.ok else REFUTED), rep.to_json(), {"max_n": a.max_n}


def _presentation(path, default):
    from .free.monoid import RewritePresentation
    if path is None:
        return RewritePresentation.parse(default, "xy")
    return RewritePresentation.load(path)


def cmd_free_relate(a):
    from .free.monoid import RewritePresentation, monoid_relate
    pres = RewritePresentation.load(a.presentation)
    res = monoid_relate(pres, a.u, a.v, a.max_len, a.max_states)
    return (VERIFIED if res else INCONCLUSIVE), res.to_json(), {"max_len": a.max_len, "max_states": a.max_states}


def cmd_free_join(a):
    from .free.monoid import RHO, SIGMA, TAU, check_cong_join_claim
    rep = check_cong_join_claim(_presentation(a.sigma, SIGMA), _presentation(a.tau, TAU),
                                _presentation(a.rho, RHO), max_i=a.max_i, max_len=a.max_len,
                                max_states=a.max_states, pair_len=a.pair_len)
    return (VERIFIED if rep.ok else REFUTED), rep.to_json(), rep.bounds


def _gens_file(path, default):
    return list(default) if path is None else _read_lines(path)


def cmd_free_ideal(a):
    from .free.ideals import monomial_ideal_member
    res = monomial_ideal_member(_read_lines(a.gens), a.monomial, a.sided)
    return (VERIFIED if res else REFUTED), res.to_json(), {}


def cmd_free_intersect(a):
    from .free.ideals import EXAMPLE_CANDIDATES, EXAMPLE_I, EXAMPLE_J, verify_intersection_generation
    rep = verify_intersection_generation(_gens_file(a.gens_i, EXAMPLE_I), _gens_file(a.gens_j, EXAMPLE_J),
                                         _gens_file(a.candidates, EXAMPLE_CANDIDATES), a.degree)
    return (VERIFIED if rep.agree else REFUTED), rep.to_json(), {"degree": a.degree}


def cmd_free_vector(a):
    from .free.monoid import example_vector_monoid, vector_monoid_analysis
    gens, fams = example_vector_monoid(a.box)
    if a.gens:
        gens, fams = [tuple(r) for r in _int_rows(a.gens)], []
    targets = [tuple(r) for r in _int_rows(a.targets)] if a.targets else []
    rep = vector_monoid_analysis(gens, fams, a.box, targets)
    ok = all(p["surjective"] for p in rep.pairs.values())
    if a.expect_indecomposable:
        ok &= all(rep.elements[str(tuple(r))]["indecomposable"] for r in _int_rows(a.expect_indecomposable))
    return (VERIFIED if ok else REFUTED), rep.to_json(), {"box": a.box}


# -- corpus ------------------------------------------------------------------------

def _subset(expected, actual) -> bool:
    if isinstance(expected, dict):
        return isinstance(actual, dict) and all(k in actual and _subset(v, actual[k]) for k, v in expected.items())
    return expected == actual


def _resolve_tokens(tokens, base):
    out = []
    for t in tokens:
        cand = os.path.join(base, t)
        out.append(cand if not os.path.isabs(t) and os.path.exists(cand) else t)
    return out


def run_experiment(path: str) -> dict:
    spec = _json_file(path)
    base = os.path.dirname(os.path.abspath(path))
    name = spec.get("name", os.path.basename(path))
    for inp in spec.get("inputs", []):
        if not os.path.exists(os.path.join(base, inp)):
            return {"name": name, "ok": False, "reason": f"missing input {inp}"}
    argv = _resolve_tokens(spec["command"], base)
    code, report = execute(argv)
    report = json.loads(json.dumps(report, default=str))
    exp = spec.get("expect", {})
    ok = code == exp.get("exit", VERIFIED) and _subset(exp.get("result", {}), report.get("result", {}))
    out = {"name": name, "ok": ok, "exit": code}
    if not ok:
        out["reason"] = f"expected exit {exp.get('exit', VERIFIED)} got {code}" if code != exp.get("exit", 0) \
            else "result does not match the expectation"
    return out


def cmd_corpus(a):
    if not os.path.isdir(a.directory):
        raise InputError(f"{a.directory} is not a directory")
    files = sorted(os.path.join(a.directory, f) for f in os.listdir(a.directory) if f.endswith(".json"))
    if a.workers > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=a.workers) as ex:
            results = list(ex.map(run_experiment, files))
    else:
        results = [run_experiment(f) for f in files]
    bad = [r["name"] for r in results if not r["ok"]]
    payload = {"total": len(results), "passed": len(results) - len(bad), "failed": bad, "results": results}
    return (VERIFIED if not bad else REFUTED), payload, {"workers": a.workers}


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(add_help=False)
    top.add_argument("--json", action="store_true", help="print the structured report")
    top.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    # the same flags after a subcommand; SUPPRESS keeps a flag given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print the structured report")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="include wall-clock time in the report")

    p = argparse.ArgumentParser(prog="sdw", description="Subdirect products, congruences and commutators "
                                "of finite algebras.", parents=[top])
    p.add_argument("--version", action="version", version=f"sdw {__version__}")
    nouns = p.add_subparsers(dest="noun", required=True)

    def leaf(sub, name, fn, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.set_defaults(fn=fn)
        return q

    alg = nouns.add_parser("alg", help="inspect algebras").add_subparsers(dest="verb", required=True)
    q = leaf(alg, "show", cmd_alg_show, "size, signature and recognised reducts")
    q.add_argument("algebra")
    q = leaf(alg, "export", cmd_alg_export, "write a built-in algebra as JSON")
    q.add_argument("name", help="e.g. group:S3, ring:UT2, lattice:M3, cyclic:4")
    q.add_argument("-o", "--output", required=True)
    leaf(alg, "zoo", cmd_alg_zoo, "list built-in algebras")

    con = nouns.add_parser("con", help="congruences").add_subparsers(dest="verb", required=True)
    q = leaf(con, "lattice", cmd_con_lattice, "all congruences with the covering relation")
    q.add_argument("algebra")
    q.add_argument("--cap", type=int, default=10**5)
    q = leaf(con, "cg", cmd_con_cg, "congruence generated by pairs")
    q.add_argument("algebra")
    q.add_argument("--pairs", action="append", default=[], help='"a,b" or "a,b;c,d" (repeatable)')
    q = leaf(con, "permute", cmd_con_permute, "do two congruences permute")
    q.add_argument("algebra")
    q.add_argument("first")
    q.add_argument("second")

    sdp = nouns.add_parser("sdp", help="subdirect products").add_subparsers(dest="verb", required=True)
    for name, fn, help_ in (("check", cmd_sdp_check, "is the subproduct subdirect"),
                            ("pairs", cmd_sdp_pairs, "pair projections and their factor kernels"),
                            ("fleischer", cmd_sdp_fleischer, "is it a fiber product"),
                            ("gens", cmd_sdp_gens, "greedy generating set"),
                            ("thm41", cmd_sdp_thm41, "union of gamma-classes check")):
        leaf(sdp, name, fn, help_).add_argument("subproduct")
    q = leaf(sdp, "fiber", cmd_sdp_fiber, "fiber product of two algebras over a common quotient")
    for flag in ("--left", "--right", "--onto", "--g", "--h"):
        q.add_argument(flag, required=True)
    q.add_argument("-o", "--output")
    q = leaf(sdp, "lift", cmd_sdp_lift, "lift generating sets of the factors to the fiber product")
    q.add_argument("subproduct")
    q.add_argument("--gens-a", required=True)
    q.add_argument("--gens-b", required=True)
    q.add_argument("--lambda-pairs", action="append", default=[])
    q.add_argument("--term", help="Mal'cev term, e.g. 'mul(mul(x0, inv(x1)), x2)'")
    q.add_argument("--budget", type=int, default=5_000_000)
    q = leaf(sdp, "certify", cmd_sdp_certify, "finite generation certificate for a candidate set")
    q.add_argument("subproduct")
    q.add_argument("--gens", required=True)

    comm = nouns.add_parser("comm", help="term-condition commutators").add_subparsers(dest="verb", required=True)
    q = leaf(comm, "compute", cmd_comm_compute, "commutator of 1 to 3 congruences")
    q.add_argument("algebra")
    q.add_argument("--congs", nargs="+", required=True, help="block-list files, inline JSON, 0 or 1")
    q.add_argument("--route", choices=("auto", "explicit", "linear"), default="auto")
    q.add_argument("--m-cap", type=int, default=10**6)
    q = leaf(comm, "class", cmd_comm_class, "supernilpotence class")
    q.add_argument("algebra")
    q.add_argument("--max-k", type=int, default=2)
    q.add_argument("--relative-to")
    q = leaf(comm, "properties", cmd_comm_properties, "check the commutator axioms C1-C6")
    q.add_argument("algebra")
    q.add_argument("--max-k", type=int, default=3)

    q = nouns.add_parser("malcev", parents=[common], help="search for a Mal'cev term")
    q.set_defaults(fn=cmd_malcev)
    q.add_argument("algebra")
    q.add_argument("--budget", type=int, default=5_000_000)
    q.add_argument("--hint", action="append", help="candidate term tried first")

    free = nouns.add_parser("free", help="free lattices, monoids and rings").add_subparsers(dest="verb", required=True)
    q = leaf(free, "lattice-leq", cmd_free_leq, "p <= q in the free lattice")
    q.add_argument("p")
    q.add_argument("q")
    q = leaf(free, "xyz-claims", cmd_free_xyz, "bounded claims about the x_n, y_n, z_n chains")
    q.add_argument("--max-n", type=int, default=6)
    q = leaf(free, "monoid-relate", cmd_free_relate, "bounded search for a rewrite path")
    q.add_argument("presentation")
    q.add_argument("u")
    q.add_argument("v")
    q.add_argument("--max-len", type=int, default=12)
    q.add_argument("--max-states", type=int, default=10**6)
    q = leaf(free, "join-claim", cmd_free_join, "finite generation of a join of monoid congruences")
    for flag in ("--sigma", "--tau", "--rho"):
        q.add_argument(flag)
    q.add_argument("--max-i", type=int, default=6)
    q.add_argument("--max-len", type=int, default=12)
    q.add_argument("--max-states", type=int, default=10**6)
    q.add_argument("--pair-len", type=int, default=8)
    q = leaf(free, "ideal-member", cmd_free_ideal, "membership in a monomial ideal")
    q.add_argument("gens")
    q.add_argument("monomial")
    q.add_argument("--sided", choices=("two", "left", "right"), default="two")
    q = leaf(free, "intersect-check", cmd_free_intersect, "generators of an intersection of monomial ideals")
    q.add_argument("--gens-i")
    q.add_argument("--gens-j")
    q.add_argument("--candidates")
    q.add_argument("--degree", type=int, default=8)
    q = leaf(free, "vector-monoid", cmd_free_vector, "pair surjectivity and indecomposables in N_0^k")
    q.add_argument("--gens", help="literal generators; default is the built-in example")
    q.add_argument("--targets")
    q.add_argument("--expect-indecomposable")
    q.add_argument("--box", type=int, default=40)

    q = nouns.add_parser("corpus", parents=[common], help="run a directory of experiment specs")
    q.set_defaults(fn=cmd_corpus)
    q.add_argument("directory")
    q.add_argument("--workers", type=int, default=1)
    return p


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    return str(o)


def execute(argv) -> tuple[int, dict]:
    """Parse and run; returns (exit code, report)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else INPUT_ERROR
        if not code:
            return VERIFIED, {"command": list(argv), "outcome": "help"}
        return INPUT_ERROR, {"command": list(argv), "outcome": OUTCOME[INPUT_ERROR], "exit": INPUT_ERROR,
                             "bounds": {}, "result": {"error": "invalid command line (see usage above)"}}
    start = time.perf_counter()
    try:
        code, payload, bounds = args.fn(args)
    except CapExceeded as exc:
        code, payload, bounds = INCONCLUSIVE, {"bound_hit": str(exc), "reached": exc.reached, "cap": exc.cap}, {}
    except (AlgebraError, InputError, OSError, ValueError, KeyError) as exc:
        code, payload, bounds = INPUT_ERROR, {"error": str(exc) or type(exc).__name__}, {}
    report = {"command": list(argv), "outcome": OUTCOME[code], "exit": code, "bounds": bounds, "result": payload}
    if getattr(args, "timing", False):
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report


def _human(report: dict) -> str:
    lines = [f"{report['outcome']}: {' '.join(report['command'])}"]
    if report.get("bounds"):
        lines.append("bounds: " + ", ".join(f"{k}={v}" for k, v in sorted(report["bounds"].items())))
    res = report.get("result", {})
    for k, v in res.items():
        if isinstance(v, (list, dict)) and len(json.dumps(v, default=_default)) > 100:
            if k == "trace":
                lines.append("trace:")
                lines.extend("  " + t for t in v)
                continue
            v = json.dumps(v, default=_default)[:97] + "..."
        lines.append(f"{k}: {v}")
    if "timing" in report:
        lines.append(f"time: {report['timing']['seconds']}s")
    return "\n".join(lines)


def _wants_json(argv) -> bool:
    if "--json" not in argv:
        return False
    try:
        with contextlib.redirect_stderr(io.StringIO()):
            return bool(getattr(build_parser().parse_args(argv), "json", False))
    except SystemExit:
        # the command line did not parse; the flag is still the caller's intent
        return True


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    code, report = execute(argv)
    if report.get("outcome") == "help":
        return VERIFIED
    if _wants_json(argv):
        print(json.dumps(report, sort_keys=True, default=_default))
    else:
        print(_human(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
