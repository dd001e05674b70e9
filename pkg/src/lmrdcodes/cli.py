"""Command-line interface: ``lmrdcodes {bound,construct,verify,search,orbits}``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage or
precondition errors.  Every command accepts ``--json``.
"""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__, kernels
from .bounds import (
    Params,
    classify_region,
    lmrd_size,
    optimal_cy,
    prop0_bound,
    prop1_bound,
    prop2_bound,
    resolve_aq_upper,
    singleton,
)
from .cdc import Cdc, echelon_ferrers, family_6_3l, family_6l, ferrers_mask, lift, st_profile, verify_cdc
from .errors import LmrdError, ProfileViolation, VerificationFailed
from .fileio import read_code, read_matrix, write_code
from .gf import field_new
from .linalg import FqMatrix, PivotVector
from .rankmetric import RankCode, gabidulin, place_in_frame, zero_code

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("lmrdcodes")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 already; keep the message format
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, record: dict, text: str) -> None:
    if args.json:
        print(json.dumps(record, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


# --- bound ---


def cmd_bound(args) -> int:
    p = Params(args.q, args.v, args.d, args.k)
    rule = args.rule
    if rule == "auto" or rule == "prop0":
        rep = prop0_bound(p)
    elif rule == "prop1":
        rep = prop1_bound(p)
    elif rule == "prop2":
        c, y = args.c, args.y
        if c is None or y is None:
            oc, oy = optimal_cy(p)
            c = oc if c is None else c
            y = oy if y is None else y
        rep = prop2_bound(p, c, y)
    elif rule == "singleton":
        from .bounds import BoundReport, Rule

        rep = BoundReport(singleton(p), Rule.SINGLETON, (p.q, p.v, p.d, p.k))
    else:
        rep = resolve_aq_upper(p.q, p.v, p.d, p.k)
    record = rep.to_dict()
    record["region"] = classify_region(p).value
    text = rep.trace()
    text += f"\n  region: {record['region']}"
    _emit(args, record, text)
    return EXIT_OK


# --- construct ---


def _largest_rectangle(field, pv: PivotVector, delta: int) -> RankCode:
    """Gabidulin code on the largest top-right rectangle of the Ferrers diagram."""
    k, n = pv.weight, pv.length - pv.weight
    free = ferrers_mask(pv).sum(axis=1)
    best = None
    for a in range(1, k + 1):
        w = int(free[a - 1])
        if min(a, w) < delta:
            continue
        size = max(a, w) * (min(a, w) - delta + 1)
        if best is None or size > best[0]:
            best = (size, a, w)
    if best is None:
        return zero_code(field, k, n)
    _, a, w = best
    return place_in_frame(gabidulin(field, a, w, delta), k, n, 0, n - w)


def _build(args) -> Cdc:
    kind = args.kind
    if kind == "family6l":
        return family_6l(args.q, args.l)
    if kind == "family63l":
        return family_6_3l(args.q, args.l)
    if kind == "lmrd":
        return lift(gabidulin(field_new(args.q), args.k, args.v - args.k, args.d // 2))
    if kind == "record1065":
        from .orbits import build_record_code

        return build_record_code(args.source, args.seed)
    if kind == "echelon-ferrers":
        if not args.pivots:
            raise LmrdError("echelon-ferrers needs --pivots")
        f = field_new(args.q)
        skeleton = [PivotVector.from_string(s) for s in args.pivots.split(",")]
        subcodes = [_largest_rectangle(f, pv, args.d // 2) for pv in skeleton]
        return echelon_ferrers(skeleton, subcodes, f, d=args.d)
    raise LmrdError(f"unknown construction {kind}")


def cmd_construct(args) -> int:
    t0 = time.perf_counter()
    c = _build(args)
    res = verify_cdc(c)
    record = {
        "construction": args.kind,
        "q": c.field.q,
        "v": c.v,
        "k": c.k,
        "claimed_d": c.claimed_d,
        "size": len(c),
        "min_distance": res.min_distance,
        "verified": c.verified,
        "seconds": round(time.perf_counter() - t0, 3),
    }
    if not c.verified:
        a, b = res.witness
        record["witness"] = [_rows(a), _rows(b)]
        msg = f"verification failed: minimum distance {res.min_distance} < {c.claimed_d}; refusing to write"
        if args.kind == "record1065" and args.source == "printed":
            msg += "\n(the printed representatives collide under the printed generator; try --source clique)"
        _emit(args, record, msg + "\n" + _witness_text(res))
        return EXIT_FAIL
    if args.output:
        write_code(c, args.output)
        record["output"] = str(args.output)
    text = f"({c.v}, {len(c)}, {res.min_distance}; {c.k})_{c.field.q} code, verified"
    if args.output:
        text += f", written to {args.output}"
    _emit(args, record, text)
    return EXIT_OK


def _rows(u) -> list[str]:
    return ["".join(str(int(x)) for x in row) for row in u.basis]


def _witness_text(res) -> str:
    if res.witness is None:
        return ""
    a, b = res.witness
    return "witness pair:\n  " + "\n  ".join(_rows(a)) + "\n  --\n  " + "\n  ".join(_rows(b))


# --- verify ---


def cmd_verify(args) -> int:
    c = read_code(args.path)
    expect = c.claimed_d if args.expect_d is None else args.expect_d
    c.claimed_d = expect
    res = verify_cdc(c, structural=not args.pairwise)
    record = {
        "path": str(args.path),
        "q": c.field.q,
        "v": c.v,
        "k": c.k,
        "size": len(c),
        "expected_d": expect,
        "min_distance": res.min_distance,
        "ok": res.ok,
        "method": res.method,
    }
    lines = [f"({c.v}, {len(c)}, {res.min_distance}; {c.k})_{c.field.q}, expected d >= {expect}: {'ok' if res.ok else 'FAILED'}"]
    if 2 * c.k <= c.v and expect >= 4:
        try:
            prof = st_profile(c, expect)
            if prof.lmrd_size == lmrd_size((c.field.q, c.v, expect, c.k)):
                record["lmrd_size"] = prof.lmrd_size
                record["st_profile"] = {str(t): n for t, n in prof.counts.items()}
                lines.append(f"LMRD part: {prof.lmrd_size}; " + ", ".join(f"S_{t} = {n}" for t, n in prof.counts.items()))
        except ProfileViolation as exc:
            record["st_profile_error"] = str(exc)
    if not res.ok:
        record["witness"] = [_rows(res.witness[0]), _rows(res.witness[1])]
        lines.append(_witness_text(res))
    _emit(args, record, "\n".join(lines))
    return EXIT_OK if res.ok else EXIT_FAIL


# --- search ---


def cmd_search(args) -> int:
    from .search import SearchConfig, extend_lmrd, gamma_subcode, verify_union

    seed = _seed(args)
    p = Params(args.q, args.v, args.d, args.k)
    f = field_new(args.q)
    e = read_code(args.subcode) if args.subcode else gamma_subcode(f, p.v, p.d, p.k)
    cfg = SearchConfig(e, n_max=args.n_max, r_max=args.r_max, seed=seed, workers=args.workers)

    def progress(restart: int, accepted: int, tried: int) -> None:
        if args.verbose:
            print(f"restart {restart}: {accepted} accepted after {tried} candidates", file=sys.stderr)

    t0 = time.perf_counter()
    result = extend_lmrd(cfg, p, progress=progress)
    union = verify_union(result.extension, p) if len(e) else verify_union(Cdc(f, p.v, p.k, p.d), p)
    record = {
        "params": dict(zip("qvdk", (p.q, p.v, p.d, p.k))),
        "seed": seed,
        "n_max": args.n_max,
        "r_max": args.r_max,
        "restart_sizes": result.restart_sizes,
        "best_restart": result.best_restart,
        "extension_size": len(result.extension),
        "code_size": len(union),
        "verified": union.verified,
        "seconds": round(time.perf_counter() - t0, 3),
    }
    if not union.verified:
        _emit(args, record, "union with the LMRD failed verification")
        return EXIT_FAIL
    if args.output:
        write_code(union, args.output)
        record["output"] = str(args.output)
    text = "\n".join(
        [f"restart {i}: {n} accepted" for i, n in enumerate(result.restart_sizes)]
        + [f"best: {len(result.extension)} extra codewords, code size {len(union)}, verified d >= {p.d}"]
    )
    _emit(args, record, text)
    return EXIT_OK


# --- orbits ---


def cmd_orbits(args) -> int:
    from . import orbits as orb

    record: dict = {}
    lines: list[str] = []
    if args.verify_paper_reps:
        rep = orb.verify_printed_representatives()
        record["printed_representatives"] = rep.__dict__
        lines.append(
            f"printed representatives: lengths {list(rep.orbit_lengths)}, clean {rep.clean}, "
            f"pairwise compatible {rep.compatible}, union {rep.union_size}, exact cover of [Γ,3] {rep.gamma_cover_exact}"
        )
        if args.skip_partition:
            _emit(args, record, "\n".join(lines))
            return EXIT_OK if rep.ok else EXIT_FAIL
    seed = args.seed
    if args.generator:
        f = field_new(args.q)
        g = FqMatrix(f, read_matrix(args.generator, args.q))
        universe = orb.gamma_universe(f, args.v, args.k, args.t)
        part = orb.orbit_partition(g, universe)
        max_int = args.k - args.d // 2
        clean, dirty = orb.filter_conflicting_orbits(part.orbits, max_int)
        clique = []
        if args.clique:
            clique = orb.orbit_compatibility_clique(clean, args.clique, max_int, seed=seed)
        stats = dict(universe=universe.shape[0], orbits=len(part), lengths=part.lengths(), dirty=len(dirty), clean=len(clean))
    else:
        st = orb.reference_orbit_statistics(args.clique, seed=seed, first_power=args.first_block_power)
        clique = st.clique
        stats = dict(universe=st.universe, orbits=st.orbits, lengths=st.lengths, dirty=st.dirty, clean=st.clean)
    record.update({k: v for k, v in stats.items() if k != "lengths"})
    record["lengths"] = {str(k): v for k, v in stats["lengths"].items()}
    record["clique_size"] = len(clique)
    record["clique_representatives"] = [_rows(o.representative) for o in clique]
    lens = ", ".join(f"{n} of length {L}" for L, n in sorted(stats["lengths"].items()))
    lines.append(
        f"{stats['universe']} subspaces, {stats['orbits']} orbits ({lens}), "
        f"{stats['dirty']} dirty, {stats['clean']} clean, clique {len(clique)}"
    )
    for o in clique:
        lines.append("  " + " ".join(_rows(o.representative)))
    _emit(args, record, "\n".join(lines))
    if args.verify_paper_reps and not record["printed_representatives"]["ok"]:
        return EXIT_FAIL
    return EXIT_OK


# --- parser ---


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine-readable record")
    common.add_argument("--verbose", action="store_true")

    parser = _Parser(prog="lmrdcodes", description="Constant dimension codes containing lifted MRD codes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def qvdk(p, need_v=True):
        p.add_argument("-q", type=int, required=True)
        p.add_argument("-v", type=int, required=need_v)
        p.add_argument("-d", type=int, required=need_v)
        p.add_argument("-k", type=int, required=need_v)

    b = sub.add_parser("bound", parents=[common], help="upper bounds for codes containing an LMRD")
    qvdk(b)
    b.add_argument("--rule", choices=["auto", "singleton", "prop1", "prop2", "prop0", "aq"], default="auto")
    b.add_argument("--c", type=int)
    b.add_argument("--y", type=int)
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("construct", parents=[common], help="build and verify a code")
    c.add_argument("kind", choices=["family6l", "family63l", "lmrd", "record1065", "echelon-ferrers"])
    c.add_argument("-q", type=int, default=2)
    c.add_argument("-v", type=int)
    c.add_argument("-d", type=int)
    c.add_argument("-k", type=int)
    c.add_argument("-l", type=int, default=1)
    c.add_argument("--pivots", help="comma-separated pivot vectors, e.g. 111000,100110")
    c.add_argument("--source", choices=["printed", "clique"], default="printed", help="record1065 orbit source")
    c.add_argument("--seed", type=int)
    c.add_argument("-o", "--output", type=Path)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="verify a code file")
    v.add_argument("path", type=Path)
    v.add_argument("--expect-d", type=int)
    v.add_argument("--pairwise", action="store_true", help="scan every pair instead of using cell structure")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="randomised LMRD extension")
    qvdk(s)
    s.add_argument("--subcode", type=Path, help="code file of E (default: all d/2-subspaces of Γ)")
    s.add_argument("--n-max", type=int, default=1)
    s.add_argument("--r-max", type=int, default=100)
    s.add_argument("--seed", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("-o", "--output", type=Path)
    s.set_defaults(func=cmd_search)

    o = sub.add_parser("orbits", parents=[common], help="orbit partition, conflict filter and clique search")
    o.add_argument("-q", type=int, default=2)
    o.add_argument("-v", type=int, default=10)
    o.add_argument("-d", type=int, default=6)
    o.add_argument("-k", type=int, default=5)
    o.add_argument("-t", type=int, default=3)
    o.add_argument("--generator", type=Path, help="generator matrix file (default: the reference generator)")
    o.add_argument("--first-block-power", type=int, default=1, help="reference run: power of the upper block")
    o.add_argument("--clique", type=int, default=5, help="target clique size (0 to skip)")
    o.add_argument("--seed", type=int)
    o.add_argument("--verify-paper-reps", action="store_true")
    o.add_argument("--skip-partition", action="store_true", help="with --verify-paper-reps only check the representatives")
    o.set_defaults(func=cmd_orbits)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (LmrdError, NotImplementedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

