"""Command line interface.

Subcommands:

    gram     -p 3,3,2                 print the Gram matrix
    snf      -p 3,3,2 --ring Q        elementary divisors + jump notation
    table    --n-max 9                reproduce the reference divisor table
    hooks    --n 4 --k 1              hook certificate vs prediction
    dual     -p 3,2                   conjugate duality check
    obstruct -p 3,3,2 --prime 2       diagonalizability obstruction tests
    verify   --n-max 6                run the identity suite

Exit status: 0 on success/match, 1 on mismatch or failed check, 2 on usage
errors.  Gram matrices are cached as checksummed JSON files under
--cache-dir (default $SPECHT_CACHE_DIR, else ~/.cache/spechtgram); a
corrupted cache entry is recomputed and rewritten.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path

from .gram import GramMatrix, gram_matrix
from .pipeline import (
    CertificationError,
    conjugate_duality,
    gram_divisors,
    hook_certificate,
)
from .qlaurent import canonical, to_rational
from .snf import (
    ElementaryDivisors,
    jump_format,
    modp_obstruction,
    q1_obstruction,
    verify_witness,
)
from .tableaux import Partition
from .verify import identity_suite

ORDER_VERSION = "v1"  # bump if the fixed tableau order ever changes

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


# -- cache -----------------------------------------------------------------------


def default_cache_dir() -> Path:
    env = os.environ.get("SPECHT_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "spechtgram"


class GramCache:
    """Checksummed JSON cache of Gram matrices, keyed by partition and the
    basis-order version; writes are atomic via rename."""

    def __init__(self, directory: Path | None):
        self.directory = directory

    def _path(self, shape: Partition) -> Path | None:
        if self.directory is None:
            return None
        name = "gram_" + "-".join(str(p) for p in shape.parts) + f"_{ORDER_VERSION}.json"
        return self.directory / name

    def load(self, shape: Partition) -> GramMatrix | None:
        path = self._path(shape)
        if path is None or not path.exists():
            return None
        try:
            blob = json.loads(path.read_text())
            payload = blob["payload"]
            digest = hashlib.sha256(
                json.dumps(payload, sort_keys=True).encode()
            ).hexdigest()
            if digest != blob["checksum"]:
                return None
            if blob["key"] != {"partition": str(shape), "version": ORDER_VERSION}:
                return None
            return GramMatrix.from_json(payload)
        except (KeyError, ValueError, json.JSONDecodeError, OSError):
            return None

    def store(self, shape: Partition, gram: GramMatrix) -> None:
        path = self._path(shape)
        if path is None:
            return
        payload = gram.to_json()
        blob = {
            "key": {"partition": str(shape), "version": ORDER_VERSION},
            "checksum": hashlib.sha256(
                json.dumps(payload, sort_keys=True).encode()
            ).hexdigest(),
            "payload": payload,
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                json.dump(blob, handle)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def cached_gram(shape: Partition, cache: GramCache) -> GramMatrix:
    hit = cache.load(shape)
    if hit is not None:
        return hit
    gram = gram_matrix(shape)
    cache.store(shape, gram)
    return gram


# -- rendering --------------------------------------------------------------------


def _render_eds(eds: ElementaryDivisors, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(eds.to_json())
    lines = []
    if eds.ring_label == "Z":
        divisors = ", ".join(str(d) for d in eds.divisors)
    else:
        divisors = ", ".join(str(canonical(d)) if not d.is_zero() else "0" for d in eds.divisors)
    lines.append(f"ring: {eds.ring_label}")
    lines.append(f"divisors: {divisors}")
    lines.append(f"jump: {jump_format(eds).render()}")
    return "\n".join(lines)


def _parse_partition(text: str) -> Partition:
    try:
        shape = Partition.parse(text)
    except (ValueError, TypeError) as err:
        raise UsageError(f"cannot parse partition {text!r}: {err}")
    if shape.n == 0:
        raise UsageError("empty partition")
    return shape


_RING_ALIASES = {
    "Q": "Q",
    "Z1": "Z1",
    "Z-AT-Q1": "Z1",
}


def _parse_ring(text: str) -> str:
    label = text.strip()
    upper = label.upper()
    if upper in _RING_ALIASES:
        return _RING_ALIASES[upper]
    if upper.startswith("FP:"):
        try:
            p = int(label[3:])
        except ValueError:
            raise UsageError(f"bad prime in ring {text!r}")
        return f"Fp:{p}"
    raise UsageError(f"unknown ring {text!r} (expected Q, Fp:<p>, or Z1)")


# -- subcommands --------------------------------------------------------------------


def cmd_gram(args, cache: GramCache) -> int:
    shape = _parse_partition(args.partition)
    gram = cached_gram(shape, cache)
    if args.format == "json":
        print(json.dumps(gram.to_json()))
    else:
        print(f"Gram matrix of {shape} ({gram.size}x{gram.size}), fixed tableau order:")
        for t in gram.order:
            print("  " + " / ".join(",".join(map(str, row)) for row in t.rows))
        for row in gram.entries:
            print("[" + ", ".join(str(e) for e in row) + "]")
    return EXIT_OK


def cmd_snf(args, cache: GramCache) -> int:
    shape = _parse_partition(args.partition)
    ring = _parse_ring(args.ring)
    gram = cached_gram(shape, cache)
    eds = gram_divisors(gram, ring)
    print(_render_eds(eds, args.format))
    return EXIT_OK


def _load_reference_table() -> list[tuple[int, str, str]]:
    text = resources.files("spechtgram.data").joinpath("divisor_table.txt").read_text()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        n, parts, jump = line.split(";", 2)
        rows.append((int(n), parts, jump))
    return rows


def cmd_table(args, cache: GramCache) -> int:
    rows = [r for r in _load_reference_table() if r[0] <= args.n_max]
    status = EXIT_OK
    results = []
    for n, parts, expected in rows:
        shape = _parse_partition(parts)
        gram = cached_gram(shape, cache)
        eds = gram_divisors(gram, "Q")
        got = jump_format(eds).render()
        ok = got == expected
        if not ok:
            status = EXIT_MISMATCH
        results.append({"n": n, "partition": parts, "computed": got, "reference": expected, "match": ok})
        if args.format == "text":
            mark = "ok  " if ok else "DIFF"
            print(f"[{mark}] n={n} ({parts}): {got}")
            if not ok:
                print(f"       reference: {expected}")
    if args.format == "json":
        print(json.dumps(results))
    return status


def cmd_hooks(args, cache: GramCache) -> int:
    n, k = args.n, args.k
    if not 0 <= k < n:
        raise UsageError(f"need 0 <= k < n, got n={n} k={k}")
    report = hook_certificate(n, k)
    if args.format == "json":
        out = {
            "shape": str(report["shape"]),
            "accepted": report["accepted"],
            "certified": [d.to_json() for d in report.get("certified", [])],
            "predicted": [d.to_json() for d in report.get("predicted", [])],
            "error": report.get("error"),
        }
        print(json.dumps(out))
    else:
        print(f"hook shape {report['shape']}")
        if "error" in report:
            print(report["error"])
        else:
            print("predicted divisors:", ", ".join(str(d) for d in report["predicted"]))
            print("certified divisors:", ", ".join(str(d) for d in report["certified"]))
            print("prediction matched:", report["matches_prediction"])
            print("transition basis unimodular:",
                  report["transition_unimodular_at_1"] and report["transition_unit_over_q"])
            print("certificate accepted:", report["accepted"])
    return EXIT_OK if report["accepted"] else EXIT_MISMATCH


def cmd_dual(args, cache: GramCache) -> int:
    shape = _parse_partition(args.partition)
    ok, idx = conjugate_duality(shape)
    if args.format == "json":
        print(json.dumps({"partition": str(shape), "holds": ok, "failing_index": idx}))
    else:
        if ok:
            print(f"conjugate duality holds for {shape}: mirrored divisor products "
                  "equal the hook polynomial up to units")
        else:
            print(f"conjugate duality FAILS for {shape} at index {idx}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_obstruct(args, cache: GramCache) -> int:
    shape = _parse_partition(args.partition)
    p = args.prime
    gram = cached_gram(shape, cache)
    ed_q = gram_divisors(gram, "Q")
    ed_p = gram_divisors(gram, f"Fp:{p}")
    ed_z = gram_divisors(gram, "Z1")
    rep_p = modp_obstruction(ed_q, ed_p, p, time_budget=args.time_budget)
    rep_z = q1_obstruction(ed_q, ed_z, p, time_budget=args.time_budget)
    checked = verify_witness(rep_p) and verify_witness(rep_z)
    if args.format == "json":
        print(json.dumps({
            "partition": str(shape),
            "prime": p,
            "mod_p": {"status": rep_p.status, "detail": rep_p.detail},
            "q1": {"status": rep_z.status, "detail": rep_z.detail},
            "witnesses_revalidated": checked,
        }))
    else:
        print(f"{shape}, p={p}")
        print("  mod-p comparison: " + rep_p.summary())
        print("  q=1 comparison:   " + rep_z.summary())
        print(f"  witnesses re-validated: {checked}")
        if rep_p.status == "obstructed" or rep_z.status == "obstructed":
            print("  => not diagonalizable over Z localized at "
                  f"{p}, adjoined q and 1/q (hence not over Z[q,1/q])")
    return EXIT_OK if checked else EXIT_MISMATCH


def cmd_verify(args, cache: GramCache) -> int:
    results = identity_suite(args.n_max)
    failures = 0
    for r in results:
        if args.format == "text":
            print(r.line())
        if not r.ok:
            failures += 1
    if args.format == "json":
        print(json.dumps([{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results]))
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spechtgram",
        description="Exact Gram matrices of Specht modules: elementary divisors, "
        "hook certificates, diagonalizability obstructions.",
    )
    parser.add_argument("--cache-dir", type=Path, default=None,
                        help="cache directory (default $SPECHT_CACHE_DIR or ~/.cache/spechtgram)")
    parser.add_argument("--no-cache", action="store_true", help="disable the Gram matrix cache")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gram = sub.add_parser("gram", help="print a Gram matrix")
    p_gram.add_argument("-p", "--partition", required=True)
    p_gram.set_defaults(func=cmd_gram)

    p_snf = sub.add_parser("snf", help="elementary divisors of a Gram matrix")
    p_snf.add_argument("-p", "--partition", required=True)
    p_snf.add_argument("--ring", default="Q", help="Q, Fp:<p>, or Z1 (q=1 over Z)")
    p_snf.set_defaults(func=cmd_snf)

    p_table = sub.add_parser("table", help="reproduce the reference divisor table")
    p_table.add_argument("--n-max", type=int, default=9)
    p_table.set_defaults(func=cmd_table)

    p_hooks = sub.add_parser("hooks", help="hook divisor certificate")
    p_hooks.add_argument("--n", type=int, required=True)
    p_hooks.add_argument("--k", type=int, required=True)
    p_hooks.set_defaults(func=cmd_hooks)

    p_dual = sub.add_parser("dual", help="conjugate duality check")
    p_dual.add_argument("-p", "--partition", required=True)
    p_dual.set_defaults(func=cmd_dual)

    p_obs = sub.add_parser("obstruct", help="diagonalizability obstruction tests")
    p_obs.add_argument("-p", "--partition", required=True)
    p_obs.add_argument("--prime", type=int, required=True)
    p_obs.add_argument("--time-budget", type=float, default=10.0)
    p_obs.set_defaults(func=cmd_obstruct)

    p_verify = sub.add_parser("verify", help="run the identity suite")
    p_verify.add_argument("--n-max", type=int, default=6)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.no_cache:
        cache = GramCache(None)
    else:
        cache = GramCache(args.cache_dir or default_cache_dir())
    try:
        return args.func(args, cache)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except CertificationError as err:
        print(f"certification failure: {err}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
