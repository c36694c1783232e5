"""Command-line front end: curve-info, congruence, parity, alc, selftest.

Curves are given inline as [a1,a2,a3,a4,a6] (decimal strings accepted), as
@file.json curve records, or as catalogue labels resolved through the fetcher
with a local write-through cache (offline mode serves the cache only).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
import urllib.error
import urllib.request
from importlib import resources

from .alc import alc_records
from .congruence import check_congruence
from .curve import (
    NeedsOverrideError,
    SingularCurveError,
    WeierstrassCurve,
    bad_primes,
    conductor,
    local_data,
)
from .galoislocal import GaloisLocalError
from .parity import (
    FieldData,
    ImpossiblePairError,
    MissingLocalDataError,
    global_report,
    select_sigma,
)

API_URL = "https://www.lmfdb.org/api/ec_curvedata/?label={label}&_format=json"
LABEL_RE = re.compile(r"^\d+\.[a-z]+\d*$")

BUILTIN_FIELDS = {
    "d5-1093": "d5_1093.json",
    "s3-257": "s3_257.json",
    "zeta19-s3-m2": "zeta19_s3_m2.json",
    "zeta19-s3-m14": "zeta19_s3_m14.json",
}


class InputError(ValueError):
    pass


class FetchError(RuntimeError):
    pass


def cache_dir() -> str:
    return os.environ.get(
        "TWISTPARITY_CACHE",
        os.path.join(os.path.expanduser("~"), ".cache", "twistparity"),
    )


def lmfdb_fetch(label: str, offline: bool = False) -> dict:
    """Curve record {"label", "ainvs"} for a catalogue label, write-through
    cached; offline mode is cache-only."""
    if not LABEL_RE.match(label):
        raise InputError(f"not a curve label: {label!r}")
    cdir = cache_dir()
    path = os.path.join(cdir, f"{label}.json")
    if os.path.exists(path):
        with open(path) as fh:
            return json.load(fh)
    if offline:
        raise FetchError(f"offline and {label} is not cached (cache: {cdir})")
    try:
        with urllib.request.urlopen(API_URL.format(label=label), timeout=30) as resp:
            payload = json.load(resp)
    except (urllib.error.URLError, OSError) as exc:
        raise FetchError(f"network failure fetching {label}: {exc}") from exc
    rows = payload.get("data") or []
    if not rows:
        raise InputError(f"unknown label {label}")
    ainvs = rows[0].get("ainvs")
    if isinstance(ainvs, str):
        ainvs = json.loads(ainvs)
    record = {"label": label, "ainvs": [int(a) for a in ainvs]}
    os.makedirs(cdir, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=cdir, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(record, fh)
    os.replace(tmp, path)  # atomic write-through
    return record


def parse_curve(spec: str, offline: bool) -> WeierstrassCurve:
    spec = spec.strip()
    if spec.startswith("["):
        try:
            ainvs = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad curve coefficients {spec!r}: {exc}") from exc
        return WeierstrassCurve.from_ainvs(ainvs)
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            rec = json.load(fh)
        return WeierstrassCurve.from_ainvs(rec["ainvs"], label=rec.get("label"))
    rec = lmfdb_fetch(spec, offline=offline)
    return WeierstrassCurve.from_ainvs(rec["ainvs"], label=rec["label"])


def load_field(spec: str) -> FieldData:
    if spec.startswith("custom:"):
        return FieldData.from_json_file(spec[len("custom:"):])
    if spec in BUILTIN_FIELDS:
        ref = resources.files("twistparity") / "fixtures" / BUILTIN_FIELDS[spec]
        return FieldData.from_dict(json.loads(ref.read_text()))
    if os.path.exists(spec):
        return FieldData.from_json_file(spec)
    raise InputError(
        f"unknown field {spec!r}; built-ins: {sorted(BUILTIN_FIELDS)} "
        "or custom:<path>")


def emit(obj, fmt: str, renderer):
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        renderer(obj)


def cmd_curve_info(args) -> int:
    E = parse_curve(args.curve, args.offline)
    b2, b4, b6, b8, c4, c6, disc, j = E.invariants()
    info = {
        "label": E.label,
        "ainvs": list(E.ainvs),
        "c4": c4, "c6": c6, "discriminant": disc,
        "j": {"numerator": j.numerator, "denominator": j.denominator},
        "conductor": conductor(E),
        "local": [],
    }
    ells = [int(x) for x in args.ell] if args.ell else bad_primes(E)
    for ell in ells:
        d = local_data(E, ell)
        entry = {
            "ell": ell, "kodaira": str(d.kodaira), "f": d.f,
            "v_delta_min": d.v_delta_min, "vj": d.vj,
            "reduction": d.reduction,
        }
        if d.is_good:
            entry["a_ell"] = d.a_ell
        info["local"].append(entry)

    def render(info):
        print(f"curve {info['label'] or ''} {info['ainvs']}")
        print(f"  c4 = {info['c4']}, c6 = {info['c6']}, disc = {info['discriminant']}")
        print(f"  conductor = {info['conductor']}")
        for e in info["local"]:
            extra = f", a_ell = {e['a_ell']}" if "a_ell" in e else ""
            print(f"  at {e['ell']}: {e['reduction']}, Kodaira {e['kodaira']}, "
                  f"f = {e['f']}, v(Dmin) = {e['v_delta_min']}{extra}")

    emit(info, args.format, render)
    return 0


def cmd_congruence(args) -> int:
    E1 = parse_curve(args.e1, args.offline)
    E2 = parse_curve(args.e2, args.offline)
    v = check_congruence(E1, E2, args.p, bound=args.bound)
    out = v.to_dict()
    out["curves"] = [E1.label or str(list(E1.ainvs)), E2.label or str(list(E2.ainvs))]

    def render(out):
        print(f"mod-{args.p} congruence: {out['status']} "
              f"(bound {out['bound_used']}, {len(out['checked_primes'])} primes checked)")
        if "refuted_at" in out:
            r = out["refuted_at"]
            print(f"  mismatch at ell = {r['ell']}: a_ell = {r['a_ell']}")

    emit(out, args.format, render)
    return 0


def cmd_parity(args) -> int:
    E1 = parse_curve(args.e1, args.offline)
    E2 = parse_curve(args.e2, args.offline)
    field_data = load_field(args.field)
    sigma = select_sigma(field_data, args.sigma)
    rep = global_report(E1, E2, field_data, sigma, args.p,
                        assume_syl=args.assume_syl,
                        congruence_bound=args.bound)
    out = rep.to_dict()

    def render(out):
        print(f"parity report: {out['curves'][0]} vs {out['curves'][1]}, "
              f"p = {out['p']}, sigma = {out['sigma']} over {out['field']}")
        for e in out["per_prime"]:
            mark = "in Sigma_0" if e["in_sigma0"] else "outside Sigma_0"
            print(f"  {e['v']}: {e['reduction'][0]} / {e['reduction'][1]} "
                  f"[{e['row']}] {mark}")
            for c in e.get("corrections", []):
                print(f"      correction <sigma_v, {c['char']}> = {c['multiplicity']}"
                      f" (side {c['side']})")
            if "local_root_ratio" in e:
                print(f"      local ratio {e['local_root_ratio']:+d}, "
                      f"delta bit {e['delta_contribution']}")
        print(f"  delta-side parity:  {out['delta_side_parity']}")
        print(f"  root-number ratio:  {out['root_side_ratio']:+d}")
        W = out["absolute_root_numbers"]
        if W["W1"] is not None:
            print(f"  absolute root numbers: W1 = {W['W1']:+d}, W2 = {W['W2']:+d}")
        else:
            print("  absolute root numbers: undetermined at some place")
        print(f"  consistent: {out['consistent']}")
        for w in out["warnings"]:
            print(f"  warning: {w}")

    emit(out, args.format, render)
    return 0 if rep.thm_consistent else 2


def cmd_alc(args) -> int:
    E1 = parse_curve(args.e1, args.offline)
    E2 = parse_curve(args.e2, args.offline)
    overrides = {}
    for item in args.override or ():
        ell, e, kind = item.split(":")
        overrides[int(ell)] = {"e": int(e), "kind": kind}
    recs = alc_records(E1, E2, args.p, overrides=overrides,
                       syl_declared=args.assume_syl)
    out = {"p": args.p, "records": [r.to_dict() for r in recs],
           "all_consistent": all(r.consistent for r in recs)}

    def render(out):
        for r in out["records"]:
            print(f"  v = {r['v']}: delta = {r['delta']}, parity {r['parity']}, "
                  f"ratio {r['local_root_ratio']:+d} "
                  f"[{r['row']}] -> {'ok' if r['consistent'] else 'INCONSISTENT'}")
        print(f"all consistent: {out['all_consistent']}")

    emit(out, args.format, render)
    return 0 if out["all_consistent"] else 2


def cmd_selftest(args) -> int:
    from .selfcheck import EXPECTED_ROWS, run_selftest

    total, coverage, failures = run_selftest()
    missing = EXPECTED_ROWS - set(coverage)
    out = {"cases": total, "coverage": coverage,
           "failures": failures, "rows_missing": sorted(missing)}

    def render(out):
        print(f"localized identity sweep: {out['cases']} cases")
        for row in sorted(out["coverage"]):
            print(f"  {row}: {out['coverage'][row]}")
        if out["rows_missing"]:
            print(f"  MISSING ROWS: {out['rows_missing']}")
        print(f"failures: {len(out['failures'])}")

    emit(out, args.format, render)
    return 0 if not failures and not missing and total else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twistparity",
        description=("Verify that the parity of twisted Selmer coranks matches "
                     "twisted root numbers for mod-p congruent elliptic curve pairs."),
    )
    ap.add_argument("--offline", action="store_true",
                    help="never touch the network; labels resolve from cache only")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    ci = sub.add_parser("curve-info", help="invariants and per-prime local data")
    ci.add_argument("--curve", required=True)
    ci.add_argument("--ell", nargs="*", help="primes to report (default: bad primes)")
    ci.set_defaults(func=cmd_curve_info)

    cg = sub.add_parser("congruence", help="bounded mod-p coefficient comparison")
    cg.add_argument("--e1", required=True)
    cg.add_argument("--e2", required=True)
    cg.add_argument("--p", type=int, required=True)
    cg.add_argument("--bound", type=int)
    cg.set_defaults(func=cmd_congruence)

    pa = sub.add_parser("parity", help="two-sided parity report for a pair")
    pa.add_argument("--e1", required=True)
    pa.add_argument("--e2", required=True)
    pa.add_argument("--p", type=int, required=True)
    pa.add_argument("--field", required=True,
                    help=f"built-in ({', '.join(sorted(BUILTIN_FIELDS))}) or custom:<path>")
    pa.add_argument("--sigma", default=None, help="e.g. 2dim-a (default: first 2-dim)")
    pa.add_argument("--bound", type=int, help="congruence bound override")
    pa.add_argument("--assume-syl", action="store_true",
                    help="declare the symplectic-isomorphism hypothesis")
    pa.set_defaults(func=cmd_parity)

    al = sub.add_parser("alc", help="trivial-twist local-constant cross-check")
    al.add_argument("--e1", required=True)
    al.add_argument("--e2", required=True)
    al.add_argument("--p", type=int, required=True)
    al.add_argument("--override", nargs="*",
                    help="wild inertia overrides as ell:e:kind, e.g. 2:24:PGNA")
    al.add_argument("--assume-syl", action="store_true")
    al.set_defaults(func=cmd_alc)

    st = sub.add_parser("selftest", help="exhaustive localized identity sweep")
    st.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FetchError, SingularCurveError, NeedsOverrideError,
            MissingLocalDataError, ImpossiblePairError, GaloisLocalError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
