"""Command line front-end.

Exit codes: 0 success (including negative verdicts), 1 domain error,
2 usage or parse error.  Payloads go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import random
import shlex
import sys
from importlib import resources
from typing import Callable, Sequence

from . import core, free, freeness, subgroups
from .randomized import iter_configs, property_failures
from .words import NAME_RE, Alphabet, ParseError, WordError, WordGroup, parse, render

FIXTURES = {
    "extracted-n3": "extracted_n3_s2.json",
    "extracted-n4": "extracted_n4_s2.json",
    "extracted-n3-s3": "extracted_n3_s3.json",
    "plain-free-n3": "plain_free_n3_s2.json",
}


class UsageError(Exception):
    pass


def _infer_alphabet(texts: Sequence[str]) -> Alphabet:
    names: list[str] = []
    for text in texts:
        for tok in text.split():
            name = tok.split("^", 1)[0]
            if NAME_RE.match(name) and name not in names:
                names.append(name)
    return Alphabet(tuple(names) or ("u",))


def _alphabet(args, texts: Sequence[str] = ()) -> Alphabet:
    if getattr(args, "alphabet", None):
        return Alphabet.parse(args.alphabet)
    return _infer_alphabet(texts)


def _load_triple(args) -> core.HGTriple | None:
    if getattr(args, "fixture", None):
        if args.fixture not in FIXTURES:
            raise UsageError(f"unknown fixture {args.fixture!r}; choose from {', '.join(FIXTURES)}")
        text = resources.files("polyadic").joinpath("fixtures", FIXTURES[args.fixture]).read_text()
        return core.HGTriple.from_json(text)
    if getattr(args, "triple", None):
        with open(args.triple) as fh:
            return core.HGTriple.from_json(fh.read(), getattr(args, "n", None))
    return None


def _nary_group(args):
    """The HG triple if one was given, else the free n-ary group on the alphabet."""
    t = _load_triple(args)
    if t is not None:
        return t
    if args.n is None:
        raise UsageError("--n is required")
    return free.FreePolyadicGroup(Alphabet.parse(args.alphabet or "u,v1"), args.n)


def _words(texts: Sequence[str], a: Alphabet):
    return [parse(t, a) for t in texts]


# ---------------------------------------------------------------------------
# subcommands; each returns (payload for --json, text lines)


def cmd_reduce(args):
    a = _alphabet(args, [args.word])
    w = parse(args.word, a)
    return {"word": render(w), "runs": [[a.names[g], e] for g, e in w.runs]}, [render(w)]


def cmd_ht(args):
    a = _alphabet(args, [args.word])
    h = parse(args.word, a).ht()
    return {"ht": h}, [str(h)]


def cmd_nary_eval(args):
    g = _nary_group(args)
    ws = _words(args.words, g.alphabet)
    r = g.f(*ws)
    return {"result": render(r)}, [render(r)]


def cmd_skew(args):
    g = _nary_group(args)
    r = g.skew(parse(args.word, g.alphabet))
    return {"skew": render(r)}, [render(r)]


def cmd_solve(args):
    g = _nary_group(args)
    coeffs = [None if t == "_" else parse(t, g.alphabet) for t in args.coeffs]
    holes = [i for i, c in enumerate(coeffs) if c is None]
    if len(holes) != 1:
        raise UsageError("mark exactly one coefficient as the hole '_'")
    x = g.solve(holes[0] + 1, coeffs, parse(args.rhs, g.alphabet))
    return {"solution": render(x)}, [render(x)]


def cmd_retract(args):
    g = _nary_group(args)
    a = parse(args.at, g.alphabet)
    ret = core.centered_retract(g, a) if args.centered else core.retract(g, a)
    x, y = parse(args.x, g.alphabet), parse(args.y, g.alphabet)
    p = ret.mul(x, y)
    payload = {
        "kind": ret.kind,
        "at": render(a),
        "product": render(p),
        "identity": render(ret.identity),
        "inverse_x": render(ret.inverse(x)),
    }
    return payload, [render(p)]


def _coset_map(args) -> subgroups.CosetMap:
    a = Alphabet.parse(args.alphabet)
    if args.residues:
        if args.modulus is None:
            raise UsageError("--residues needs --modulus")
        return subgroups.CosetMap(a, args.modulus, tuple(int(r) for r in args.residues.split(",")))
    if args.modulus is not None:
        return subgroups.CosetMap.height(a, args.modulus)
    if args.n is None:
        raise UsageError("give --n or --modulus")
    return subgroups.CosetMap.height(a, args.n - 1)


def cmd_schreier_basis(args):
    c = _coset_map(args)
    t = subgroups.schreier_transversal(c)
    basis = subgroups.schreier_basis(c, t)
    payload = {
        "modulus": c.modulus,
        "transversal": [render(w) for w in t],
        "basis": [render(w) for w in basis],
        "rank": len(basis),
    }
    return payload, [render(w) for w in basis]


def cmd_fold(args):
    a = _alphabet(args, args.words)
    g = subgroups.fold(_words(args.words, a), a)
    if args.dot:
        return {"dot": g.to_dot()}, [g.to_dot()]
    payload = dict(g.to_json(), rank=g.rank, index=g.index)
    idx = "infinite" if g.index is None else str(g.index)
    return payload, [f"vertices\t{g.num_vertices}", f"rank\t{g.rank}", f"index\t{idx}"]


def cmd_member(args):
    a = _alphabet(args, list(args.gens) + [args.word])
    g = subgroups.fold(_words(args.gens, a), a)
    ok = subgroups.member(g, parse(args.word, a))
    return {"member": ok}, [str(ok).lower()]


def cmd_is_basis(args):
    a = _alphabet(args, args.words)
    cert = subgroups.is_basis_of_whole_group(_words(args.words, a), a)
    lines = [cert.verdict] + ([cert.reason] if cert.reason else [])
    return cert.to_dict(), lines


def _free_group(args) -> free.FreePolyadicGroup:
    return free.FreePolyadicGroup(Alphabet.parse(args.alphabet or "u,v1"), args.n)


def cmd_extract_hg(args):
    e = free.extract_hg(_free_group(args))
    t = e.triple
    lines = [f"theta({x})\t{render(w)}" for x, w in zip(t.alphabet.names, t.theta.images)]
    lines += [f"b\t{render(t.b)}", f"identity\t{render(e.retract.identity)}"]
    return e.to_dict(), lines


def cmd_basis_pipeline(args):
    p = free.basis_pipeline(_free_group(args))
    d = p.to_dict()
    lines = [f"{key}\t{', '.join(d[key])}" for key in ("B", "B_prime", "B_double_prime", "expected")]
    lines.append(f"matches\t{str(p.matches).lower()}")
    return d, lines


def cmd_cover_extend(args):
    g = _free_group(args)
    if args.target_alphabet:
        target_alpha = Alphabet.parse(args.target_alphabet)
    else:
        # the source alphabet if the images fit in it, else the names they use
        used = _infer_alphabet([item.split("=", 1)[-1] for item in args.image] + [args.pivot])
        fits = all(x in g.alphabet.names for x in used.names)
        target_alpha = g.alphabet if fits else used
    target = WordGroup(target_alpha, parse(args.pivot, target_alpha), args.modulus)
    beta = {}
    for item in args.image:
        if "=" not in item:
            raise UsageError(f"--image expects NAME=WORD, got {item!r}")
        name, word = item.split("=", 1)
        beta[name.strip()] = parse(word, target_alpha)
    h = free.cover_extend(g, beta, target)
    images = {x: render(h(gw)) for x, gw in zip(g.alphabet.names, g.alphabet.gens())}
    payload = {"images": images}
    lines = [f"{x}\t{w}" for x, w in images.items()]
    if args.apply:
        out = {t: render(h(parse(t, g.alphabet))) for t in args.apply}
        payload["applied"] = out
        lines += [f"h({t})\t{w}" for t, w in out.items()]
    return payload, lines


def cmd_verify_table(args):
    if args.file:
        with open(args.file) if args.file != "-" else sys.stdin as fh:
            t = core.FiniteNaryTable.from_json(fh.read())
    elif args.cyclic is not None:
        t = core.cyclic_b_derived(args.cyclic, args.n or 3, args.b)
    elif args.max is not None:
        t = core.max_table(args.max, args.n or 3)
    else:
        raise UsageError("give a table file, --cyclic Q or --max Q")
    rep = t.verify_axioms()
    d = rep.to_dict()
    if rep.ok:
        d["nary_identity"] = core.detect_nary_identity(t)
    lines = [d["verdict"]]
    if rep.counterexample:
        lines.append(json.dumps(rep.counterexample))
    return d, lines


def cmd_decide_free(args):
    t = _load_triple(args)
    if t is None:
        if args.n is None:
            raise UsageError("--n is required without --triple/--fixture")
        t = free.hg_triple(_free_group(args))
    cands = tuple(parse(w, t.alphabet) for w in args.witness) if args.witness else None
    q = freeness.FreenessQuery(t, cands, args.bound, args.max_candidates)
    r = freeness.decide(q)
    d = r.to_dict()
    lines = [r.verdict, f"s\t{r.s}", f"k\t{r.k}"]
    if r.witnesses:
        lines.append("witnesses\t" + ", ".join(render(w) for w in r.witnesses))
    if r.certificate is not None:
        lines.append("basis\t" + ", ".join(render(w) for w in r.certificate.generators))
    if r.detail:
        lines.append(r.detail)
    return d, lines


def cmd_properties(args):
    rng = random.Random(args.seed)
    rows = []
    for n, rank in iter_configs(args.max_n, args.max_rank):
        fails = property_failures(rng, n, rank, args.trials, args.max_len)
        rows += [{"n": n, "rank": rank, "check": k, "trials": args.trials, "failures": v} for k, v in fails.items()]
    lines = ["n\trank\tcheck\ttrials\tfailures"]
    lines += [f"{r['n']}\t{r['rank']}\t{r['check']}\t{r['trials']}\t{r['failures']}" for r in rows]
    return {"seed": args.seed, "rows": rows}, lines


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyadic", description="Exact computations with free n-ary groups.")
    p.add_argument("--json", action="store_true", help="emit JSON payloads instead of text")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, description=help)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
        sp.set_defaults(func=fn)
        return sp

    def nary(sp):
        sp.add_argument("--n", type=int, help="arity (>= 3)")
        sp.add_argument("--alphabet", help="comma separated generators, default u,v1")
        sp.add_argument("--triple", help="HG triple JSON file instead of the free n-ary group")
        sp.add_argument("--fixture", help=f"bundled triple: {', '.join(FIXTURES)}")

    sp = add("reduce", cmd_reduce, "freely reduce a word")
    sp.add_argument("word", help="word such as 'u u^-1 v1'")
    sp.add_argument("--alphabet", help="comma separated generators (default: names in the word)")

    sp = add("ht", cmd_ht, "exponent sum of a word")
    sp.add_argument("word", help="word such as 'u^2 v1^-1'")
    sp.add_argument("--alphabet", help="comma separated generators (default: names in the words)")

    sp = add("nary-eval", cmd_nary_eval, "evaluate the n-ary product f(w_1, ..., w_n)")
    nary(sp)
    sp.add_argument("words", nargs="+", help="the n arguments")

    sp = add("skew", cmd_skew, "skew element of a word")
    nary(sp)
    sp.add_argument("word", help="carrier element")

    sp = add("solve", cmd_solve, "solve f(a_1..x..a_n) = rhs; mark the unknown with _")
    nary(sp)
    sp.add_argument("--rhs", required=True, help="right-hand side")
    sp.add_argument("coeffs", nargs="+", help="n coefficients, one of them _")

    sp = add("retract", cmd_retract, "binary product x*y = f(x, a, ..., a, y) of the retract at a")
    nary(sp)
    sp.add_argument("--at", default="u", help="retract element (default u)")
    sp.add_argument("--centered", action="store_true",
                    help="use x o y = f(x, skew(a), a, ..., a, y), whose identity is a")
    sp.add_argument("x", help="left factor")
    sp.add_argument("y", help="right factor")

    sp = add("schreier-basis", cmd_schreier_basis, "Schreier transversal and basis of a kernel onto Z_m")
    sp.add_argument("--alphabet", default="u,v1", help="comma separated generators (default u,v1)")
    sp.add_argument("--n", type=int, help="use the height map mod n-1")
    sp.add_argument("--modulus", type=int, help="modulus m (overrides --n)")
    sp.add_argument("--residues", help="comma separated residues per generator")

    sp = add("fold", cmd_fold, "Stallings graph of the subgroup generated by words")
    sp.add_argument("words", nargs="*", help="subgroup generators")
    sp.add_argument("--alphabet", help="comma separated generators (default: names in the words)")
    sp.add_argument("--dot", action="store_true", help="print Graphviz DOT")

    sp = add("member", cmd_member, "membership of a word in the subgroup generated by --gen words")
    sp.add_argument("--gen", dest="gens", action="append", default=[], required=True,
                    help="subgroup generator (repeat)")
    sp.add_argument("--alphabet", help="comma separated generators (default: names in the words)")
    sp.add_argument("word", help="word to test")

    sp = add("is-basis", cmd_is_basis, "is the set a basis of the whole free group?")
    sp.add_argument("words", nargs="*", help="candidate basis")
    sp.add_argument("--alphabet", help="comma separated generators (default: names in the words)")

    for name, fn, text in (("extract-hg", cmd_extract_hg, "Hosszu-Gluskin triple of the free n-ary group"),
                           ("basis-pipeline", cmd_basis_pipeline, "B, B', B'' bases for the free n-ary group")):
        sp = add(name, fn, text)
        sp.add_argument("--n", type=int, required=True, help="arity (>= 3)")
        sp.add_argument("--alphabet", default="u,v1", help="generators, first one is u (default u,v1)")

    sp = add("cover-extend", cmd_cover_extend, "extend a generator map to the Post cover")
    sp.add_argument("--n", type=int, required=True, help="arity (>= 3)")
    sp.add_argument("--alphabet", default="u,v1", help="generators of the free n-ary group (default u,v1)")
    sp.add_argument("--image", action="append", default=[], required=True, help="NAME=WORD (repeat)")
    sp.add_argument("--target-alphabet", help="alphabet of the target free group")
    sp.add_argument("--pivot", default="1", help="identity of the target group (default 1)")
    sp.add_argument("--modulus", type=int, default=1, help="target carrier modulus (default 1)")
    sp.add_argument("--apply", action="append", help="word to map (repeat)")

    sp = add("verify-table", cmd_verify_table, "check the polyadic axioms of a finite table")
    sp.add_argument("file", nargs="?", help="table JSON {q, n, table}; '-' for stdin")
    sp.add_argument("--n", type=int, help="arity for --cyclic and --max")
    sp.add_argument("--cyclic", type=int, metavar="Q", help="f = x_1 + ... + x_n + b over Z_Q")
    sp.add_argument("--b", type=int, default=0, help="constant b for --cyclic (default 0)")
    sp.add_argument("--max", type=int, metavar="Q", help="f = max(x_1, ..., x_n) over 0..Q-1")

    sp = add("decide-free", cmd_decide_free, "decide freeness of a (theta, b)-derived n-ary group")
    nary(sp)
    sp.add_argument("--bound", type=int, default=1, help="maximal witness word length")
    sp.add_argument("--witness", action="append", help="candidate witness (repeat)")
    sp.add_argument("--max-candidates", type=int, default=freeness.DEFAULT_MAX_CANDIDATES,
                    help="give up after this many witness tuples")

    sp = add("properties", cmd_properties, "randomized associativity / Dornte / retract / solve checks")
    sp.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    sp.add_argument("--trials", type=int, default=100, help="trials per configuration (default 100)")
    sp.add_argument("--max-n", type=int, default=5, help="largest arity (default 5)")
    sp.add_argument("--max-rank", type=int, default=3, help="largest alphabet size (default 3)")
    sp.add_argument("--max-len", type=int, default=16, help="longest random word (default 16)")

    sp = add("batch", None, "run one command per line from a file ('-' for stdin)")
    sp.add_argument("file", help="command file, '-' for stdin")
    return p


def _emit(payload, lines, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "batch":
            return _run_batch(args.file, args.json, out, err)
        payload, lines = args.func(args)
    except (ParseError, UsageError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (WordError, core.PolyadicError, ValueError, IndexError) as exc:
        err.write(json.dumps({"error": type(exc).__name__, "reason": str(exc)}) + "\n")
        return 1
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 2
    _emit(payload, lines, args.json, out)
    return 0


def _run_batch(path: str, as_json: bool, out, err) -> int:
    fh = sys.stdin if path == "-" else open(path)
    worst = 0
    with fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            argv = shlex.split(line)
            if as_json and "--json" not in argv:
                argv = ["--json"] + argv
            out.write(f"$ {line}\n")
            worst = max(worst, run(argv, out, err))
    return worst


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
