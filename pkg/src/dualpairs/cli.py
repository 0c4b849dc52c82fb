"""Batch front end: ``dualpairs relations|duality|characters|labels``.

Exit codes: 0 when every check passes, 1 when some check is verified false
(a JSON witness goes to stdout), 2 on usage or configuration errors.
Reports are deterministic: keys are sorted and nothing depends on timing.
The ``DUALPAIRS_WORKERS`` environment variable bounds the process pool.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import isqrt

from . import duality as D
from . import qseries as Q
from .fock import FockConfig, graded_dim
from .repops import MODE_CONVENTIONS, RelationReport, relation_tasks
from .symalg.labels import labels_from_exponents

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
WORKERS_ENV = "DUALPAIRS_WORKERS"
CHARACTER_IDS = ("gauss", "v1plus", "virasoro-sum", "boson-fermion")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    l: int | None = None
    group: str = "gl"
    emax: int | None = None
    series_order2: int | None = None
    output: str | None = None
    csv_output: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.emax is not None and self.emax < 0:
            raise UsageError("--emax must be non-negative")
        if self.series_order2 is not None and self.series_order2 < 0:
            raise UsageError("--order must be non-negative")
        if self.group not in D.GROUPS:
            raise UsageError(f"unknown group {self.group!r}")
        if self.l is not None:
            if self.group == "o1" and self.l != 0:
                raise UsageError("the o1 group acts on the bare neutral fermion; use --l 0")
            if self.group != "o1" and self.l < 1:
                raise UsageError("--l must be at least 1 for charged fermions")
        if self.workers < 1:
            raise UsageError(f"{WORKERS_ENV} must be a positive integer")

    def fock(self, default_emax: int) -> FockConfig:
        emax2 = 2 * (default_emax if self.emax is None else self.emax)
        if self.group == "o1":
            return FockConfig(0, True, emax2)
        return FockConfig(1 if self.l is None else self.l, False, emax2)


def workers_from_env(env=None) -> int:
    raw = (os.environ if env is None else env).get(WORKERS_ENV)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None


def _call(fn, kwargs):
    return fn(**kwargs)


def run_tasks(tasks, workers: int) -> list:
    """Run (name, fn, kwargs) tasks, returning results in submission order."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(**kw) for _, fn, kw in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        futures = [pool.submit(_call, fn, kw) for _, fn, kw in tasks]
        return [f.result() for f in futures]


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(run: RunConfig, payload: dict, passed: bool, witness) -> int:
    if run.output:
        with open(run.output, "w", encoding="utf-8") as fh:
            fh.write(_dumps(payload))
    if not passed:
        sys.stdout.write(_dumps({"schema": 1, "command": run.command, "witness": witness}))
    return EXIT_OK if passed else EXIT_FAIL


# -- relations -------------------------------------------------------------------

def cmd_relations(run: RunConfig) -> int:
    config = run.fock(default_emax=6)
    tasks = relation_tasks(config)
    reports: list[RelationReport] = run_tasks(tasks, run.workers)
    failing = []
    for (name, _, _), rep in zip(tasks, reports):
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status} {name}: {rep.instances} instances, {len(rep.failures)} failures")
        if not rep.passed:
            failing.append({"task": name, "failures": rep.failures})
    passed = not failing
    payload = {
        "schema": 1,
        "command": "relations",
        "params": {"l": config.l, "neutral": config.with_neutral, "emax2": config.emax2},
        "mode_conventions": list(MODE_CONVENTIONS),
        "suites": [dict(rep.to_dict(), task=name) for (name, _, _), rep in zip(tasks, reports)],
        "passed": passed,
    }
    return _emit(run, payload, passed, failing)


# -- duality ---------------------------------------------------------------------------

def cmd_duality(run: RunConfig) -> int:
    config = run.fock(default_emax=3)
    tasks = [("verify_duality", D.verify_duality, {"group": run.group, "config": config})]
    with_content = (run.group == "o2l" and config.l == 1) or run.group == "o1"
    if with_content:
        tasks.append(("virasoro_content", D.virasoro_content_checks, {"config": config}))
    results = run_tasks(tasks, run.workers)
    rep: D.IsotypicReport = results[0]
    for s in rep.sectors:
        if run.group == "gl":
            lam = D.PartitionA(s["lambda"])
        else:
            lam = D.PartitionD(s["lambda"], bar=s["bar"], det=s["det"])
        status = "match" if s["match"] else "MISMATCH"
        print(f"{lam.label()} at energy {s['energy2']}/2: {s['algebra_weight']} {status}")
    for c in rep.completeness:
        if c["lhs"] != c["rhs"]:
            print(f"completeness fails at energy {c['energy2']}/2: {c['lhs']} != {c['rhs']}")
    payload = rep.to_dict()
    payload["command"] = "duality"
    passed = rep.passed
    witness = {"failures": rep.failures,
               "sectors": [s for s in rep.sectors if not s["match"]],
               "completeness": [c for c in rep.completeness if c["lhs"] != c["rhs"]]}
    if with_content:
        content: RelationReport = results[1]
        payload["virasoro_content"] = content.to_dict()
        passed = passed and content.passed
        witness["virasoro_content"] = content.failures
        print(f"virasoro content: {content.instances} energies, "
              f"{'PASS' if content.passed else 'FAIL'}")
    payload["passed"] = passed
    print(f"{len(rep.sectors)} sectors, {'all matched' if passed else 'FAILED'}")
    return _emit(run, payload, passed, witness)


# -- characters ---------------------------------------------------------------------

def character_sides(cid: str, order: int):
    """(lhs, rhs) for a character identity, both truncated at q^order."""
    n2 = 2 * order
    if cid == "gauss":
        lhs = Q.product_form("one_minus_q_j", n2) / Q.product_form("one_plus_q_j", n2)
        return lhs, Q.gauss_rhs(n2)
    if cid == "v1plus":
        return Q.ch_v1plus_product(n2), Q.ch_v1plus_theta(n2)
    if cid == "virasoro-sum":
        return Q.virasoro_sum(isqrt(order // 4), n2), Q.ch_v1plus(n2)
    if cid == "boson-fermion":
        return Q.charged_fermion_product(n2), Q.jacobi_triple_form(n2)
    raise UsageError(f"unknown character id {cid!r}")


def _series_rows(lhs, rhs):
    if isinstance(lhs, Q.BigradedSeries):
        keys = sorted(set(lhs.coeffs) | set(rhs.coeffs))
        return ["charge", "exponent_numerator", "exponent_denominator", "lhs", "rhs"], [
            (m, k, 2, lhs[(m, k)], rhs[(m, k)]) for m, k in keys
        ]
    return ["exponent_numerator", "exponent_denominator", "lhs", "rhs"], [
        (k, 2, lhs[k], rhs[k]) for k in range(0, lhs.order2 + 1, 2)
    ]


def cmd_characters(run: RunConfig, cid: str) -> int:
    order = 20 if run.series_order2 is None else run.series_order2 // 2
    try:
        lhs, rhs = character_sides(cid, order)
    except Q.ConsistencyError as exc:
        return _emit(run, {"schema": 1, "command": "characters", "id": cid, "passed": False},
                     False, {"error": str(exc)})
    header, rows = _series_rows(lhs, rhs)
    mismatches = [dict(zip(header, r)) for r in rows if r[-1] != r[-2]]
    extra = {}
    if cid == "boson-fermion":
        # charge-0 graded dimensions of the l = 1 Fock space are p(k)
        config = FockConfig(1, False, 2 * order)
        fock = [graded_dim(config, (0,), 2 * k) for k in range(order + 1)]
        parts = [Q.partition_count(k) for k in range(order + 1)]
        slice0 = lhs.charge_slice(0).to_list()
        extra["charge0_fock_dims"] = fock
        extra["partitions"] = parts
        if not (fock == parts == slice0):
            mismatches.append({"charge0_fock_dims": fock, "partitions": parts,
                               "charge0_product": slice0})
    passed = not mismatches
    if run.csv_output:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        with open(run.csv_output, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    print(f"{cid} to q^{order}: {'PASS' if passed else 'FAIL'}")
    if not isinstance(lhs, Q.BigradedSeries):
        print("lhs: " + " ".join(str(x) for x in lhs.to_list()))
    payload = {
        "schema": 1,
        "command": "characters",
        "id": cid,
        "order": order,
        "columns": header,
        "rows": [list(r) for r in rows],
        "mismatches": mismatches,
        "passed": passed,
    }
    payload.update(extra)
    return _emit(run, payload, passed, mismatches)


# -- labels ------------------------------------------------------------------------------

def _parse_lambda(text: str | None, group: str, bar: bool, det: bool):
    try:
        parts = [int(x) for x in text.split(",")] if text else []
    except ValueError:
        raise UsageError(f"--lambda must be comma-separated integers, got {text!r}") from None
    try:
        if group == "gl":
            if not parts:
                raise UsageError("--lambda is required for gl")
            if bar or det:
                raise UsageError("--bar and --det only apply to o2l and o1")
            return D.PartitionA(parts)
        if group == "o1":
            if bar or any(parts):
                raise UsageError("o1 sectors are 0 and det")
            return D.PartitionD((0,), det=det)
        return D.PartitionD(parts or [0], bar=bar, det=det)
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from None


def cmd_labels(run: RunConfig, text: str | None, bar: bool, det: bool, n: int) -> int:
    if n < 0:
        raise UsageError("--n must be non-negative")
    lam = _parse_lambda(text, run.group, bar, det)
    if run.group == "o1":
        config = FockConfig(0, True, 2 if run.emax is None else 2 * run.emax)
    else:
        if run.l is not None and run.l != lam.l:
            raise UsageError(f"--l {run.l} does not match the {lam.l} parts of --lambda")
        emax2 = sum(m * m for m in lam.parts) + 2 if run.emax is None else 2 * run.emax
        config = FockConfig(lam.l, False, emax2)
    eps = D.reconcile_signs().epsilon
    side = "A" if run.group == "gl" else "Dplus"
    if run.group == "gl":
        exps = D.exponent_set_A(lam)
    elif run.group == "o1":
        exps = D.ExponentSet(config.central_charge, {1: 1} if lam.det else {}, "Dplus")
    else:
        exps = D.exponent_set_D(lam)
    predicted = labels_from_exponents(exps, n, eps)
    found = D.locate_hwv(run.group, lam, config)
    payload = {
        "schema": 1,
        "command": "labels",
        "group": run.group,
        "lambda": lam.label(),
        "side": side,
        "sign_epsilon": eps,
        "exponent_set": D._exp_json(exps),
        "predicted": D._labels_json(predicted),
        "decoded": None,
        "energy2": None,
        "emax2": config.emax2,
    }
    print(f"{lam.label()} exponents {payload['exponent_set']}")
    print("predicted: " + json.dumps(payload["predicted"]))
    passed = True
    if found is None:
        print(f"no highest weight vector within emax2={config.emax2}")
    else:
        v, e2 = found
        decoded = D.decode_labels(v, side, n, config)
        passed = decoded == predicted
        payload["decoded"] = D._labels_json(decoded)
        payload["energy2"] = e2
        print("decoded:   " + json.dumps(payload["decoded"]))
        print("match" if passed else "MISMATCH")
    payload["match"] = passed if found is not None else None
    return _emit(run, payload, passed, {"predicted": payload["predicted"],
                                        "decoded": payload["decoded"]})


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dualpairs", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, group=True):
        sp.add_argument("--l", type=int, default=None, help="number of charged fermion pairs")
        if group:
            sp.add_argument("--group", choices=D.GROUPS, default="gl")
        sp.add_argument("--emax", type=int, default=None,
                        help="integer energy bound (doubled internally)")
        sp.add_argument("--json", dest="json_path", default=None, metavar="PATH")

    sp = sub.add_parser("relations", help="operator relation suites")
    common(sp)
    sp = sub.add_parser("duality", help="joint highest weight decomposition")
    common(sp)
    sp = sub.add_parser("characters", help="q-series identities")
    sp.add_argument("--id", dest="cid", choices=CHARACTER_IDS, required=True)
    sp.add_argument("--order", type=int, default=20, help="highest power of q compared")
    sp.add_argument("--json", dest="json_path", default=None, metavar="PATH")
    sp.add_argument("--csv", dest="csv_path", default=None, metavar="PATH")
    sp = sub.add_parser("labels", help="predicted and decoded highest weight labels")
    common(sp)
    sp.add_argument("--lambda", dest="lam", default=None, help="comma-separated parts")
    sp.add_argument("--bar", action="store_true")
    sp.add_argument("--det", action="store_true")
    sp.add_argument("--n", type=int, default=6, help="number of labels")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        run = RunConfig(
            command=args.command,
            l=args.l if hasattr(args, "l") else None,
            group=getattr(args, "group", "gl"),
            emax=getattr(args, "emax", None),
            series_order2=2 * args.order if args.command == "characters" else None,
            output=args.json_path,
            csv_output=getattr(args, "csv_path", None),
            workers=workers_from_env(),
        )
        if args.command == "relations":
            return cmd_relations(run)
        if args.command == "duality":
            return cmd_duality(run)
        if args.command == "characters":
            return cmd_characters(run, args.cid)
        return cmd_labels(run, args.lam, args.bar, args.det, args.n)
    except UsageError as exc:
        print(f"dualpairs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dualpairs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
