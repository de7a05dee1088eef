"""Command-line interface: ``snwave construct | verify | dimension | classify | sample``.

Exit statuses: 0 success / verdict true, 1 verdict false, 2 usage error,
3 I/O or parse error.

Wavelets travel between commands as JSON descriptors with every rational
stored as a ``"p/q"`` string. ``verify`` records a fingerprint of the
profiles it accepted; ``classify`` insists on it (or ``--force-verify``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .class_analysis import classify
from .dimension_analysis import closed_form_dn, dimension_function, mra_verdict, write_csv
from .exact_scalars import fraction_str
from .frequency_sets import sn_geometry
from .profiles import PhaseProfile, StepProfile
from .time_domain import sample_time
from .time_domain import write_csv as write_samples
from .wavelet_builder import FAMILIES, FrequencyWavelet, build_family, coupled_phase, extend_bell, random_candidate
from .wavelet_verifier import verify

log = logging.getLogger("snwave")

SCHEMA = 1
OUTDIR_ENV = "SNWAVE_OUTDIR"

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DescriptorError(Exception):
    pass


# ---------------------------------------------------------------------------
# descriptors


def _encode(value):
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    return value


def _decode_params(params: dict) -> dict:
    out = dict(params)
    if "perturbed" in out:
        out["perturbed"] = [[Fraction(lo), Fraction(hi)] for lo, hi in out["perturbed"]]
    if "eps" in out:
        out["eps"] = Fraction(out["eps"])
    return out


def fingerprint(w: FrequencyWavelet) -> str:
    body = json.dumps({"mag2": w.mag2.to_json(), "phase": w.phase.to_json()}, sort_keys=True)
    return hashlib.sha256(body.encode()).hexdigest()


def serialize(w: FrequencyWavelet, notes: str = "", verified: bool = False) -> dict:
    params = {k: v for k, v in w.params.items() if k not in ("seed", "kind", "p")}
    data = {
        "schema": SCHEMA,
        "family": w.family,
        "n": w.n,
        "p": w.params.get("p"),
        "seed": w.params.get("seed"),
        "kind": w.params.get("kind"),
        "notes": notes,
        "params": _encode(params),
        "mag2": w.mag2.to_json(),
        "phase": w.phase.to_json(),
    }
    if verified:
        data["verified"] = {"sha256": fingerprint(w)}
    return data


def parse(data: dict) -> FrequencyWavelet:
    """Inverse of :func:`serialize`; raises :class:`DescriptorError` naming the bad field."""
    if not isinstance(data, dict):
        raise DescriptorError("descriptor: top level must be an object")
    if data.get("schema") != SCHEMA:
        raise DescriptorError(f"descriptor.schema: expected {SCHEMA}, got {data.get('schema')!r}")
    for key in ("mag2", "phase"):
        if key not in data:
            raise DescriptorError(f"descriptor.{key}: missing")
    try:
        mag2 = StepProfile.from_json(data["mag2"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DescriptorError(f"descriptor.mag2: {exc}") from exc
    try:
        phase = PhaseProfile.from_json(data["phase"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DescriptorError(f"descriptor.phase: {exc}") from exc
    params = _decode_params(data.get("params") or {})
    for key in ("p", "seed", "kind"):
        if data.get(key) is not None:
            params[key] = data[key]
    n = data.get("n")
    if n is not None and not isinstance(n, int):
        raise DescriptorError("descriptor.n: must be an integer or null")
    try:
        return FrequencyWavelet(mag2, phase, n=n, family=data.get("family", "custom"), params=params)
    except ValueError as exc:
        raise DescriptorError(f"descriptor.mag2: {exc}") from exc


def load_descriptor(path: str) -> tuple[FrequencyWavelet, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DescriptorError(f"{path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        return parse(data), data
    except DescriptorError as exc:
        raise DescriptorError(f"{path}: {exc}") from exc


def _output_path(name: str) -> Path:
    path = Path(name)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    return path


def _write_json(path: Path, data: dict) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(data, indent=2) + "\n")
    except OSError as exc:
        raise DescriptorError(f"{path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args) -> int:
    fam = args.family
    if fam in ("custom", "random") and args.n is None:
        raise UsageError(f"--family {fam} needs --n")
    if args.bell is not None and fam != "custom":
        raise UsageError("--bell only applies to --family custom")
    if (args.seed is not None or args.kind is not None or args.even) and fam != "random":
        raise UsageError("--seed/--kind/--even only apply to --family random")
    if args.p is not None and fam != "msf-b":
        raise UsageError("--p only applies to --family msf-b")

    try:
        if fam == "custom":
            if args.bell is None:
                raise UsageError("--family custom needs --bell FILE")
            geom = sn_geometry(args.n)
            try:
                bell = StepProfile.from_json(json.loads(Path(args.bell).read_text()))
            except OSError as exc:
                raise DescriptorError(f"{args.bell}: {exc.strerror or exc}") from exc
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DescriptorError(f"{args.bell}: not a step-profile bell: {exc}") from exc
            mag2 = extend_bell(geom, bell)
            w = FrequencyWavelet(mag2, coupled_phase(geom, mag2), n=args.n, family="custom")
        elif fam == "random":
            w = random_candidate(sn_geometry(args.n), args.seed or 0, args.kind or "valid", even=args.even)
        else:
            if fam == "msf-b" and args.p is None:
                raise UsageError("--family msf-b needs --p")
            w = build_family(fam, args.n, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    out = _output_path(args.output)
    _write_json(out, serialize(w, notes=args.notes or ""))
    sup = w.support
    print(f"wrote {out}: support measure {fraction_str(sup.length)} pi, {len(sup.pieces)} pieces")
    return EXIT_OK


def cmd_verify(args) -> int:
    w, data = load_descriptor(args.file)
    report = verify(w)
    print(json.dumps(report.to_json(), indent=2))
    if not report.ok:
        for lo, hi, v in report.eq1_failures[:3]:
            print(f"eq1 fails on [{fraction_str(lo)}, {fraction_str(hi)}) pi: sum = {fraction_str(v)}", file=sys.stderr)
        for m, lo, hi, _ in report.eq2_witnesses[:3]:
            print(f"eq2 fails for m = {m} on [{fraction_str(lo)}, {fraction_str(hi)}) pi", file=sys.stderr)
    if args.record:
        if report.ok:
            data["verified"] = {"sha256": fingerprint(w)}
        else:
            data.pop("verified", None)
        _write_json(Path(args.file), data)
    return EXIT_OK if report.ok else EXIT_FALSE


def cmd_dimension(args) -> int:
    if args.closed_form is not None and args.closed_form < 3:
        raise UsageError("--closed-form needs N >= 3")
    w, _ = load_descriptor(args.file)
    try:
        d = dimension_function(w)
    except ValueError as exc:
        raise UsageError(f"dimension function undefined: {exc}") from exc
    if args.json:
        print(json.dumps(d.to_json(), indent=2))
    else:
        for lo, hi, v in d.cells():
            print(f"[{fraction_str(lo)}, {fraction_str(hi)}) pi\t{fraction_str(v)}")
        attained = ",".join(fraction_str(v) for v in sorted(d.values_attained))
        verdict = mra_verdict(w)
        print(f"max={fraction_str(d.max_value)} attained={{{attained}}} is_mra={str(d.is_mra).lower()}")
        if verdict.evidence is not None:
            lo, hi, v = verdict.evidence
            print(f"evidence: D = {fraction_str(v)} on [{fraction_str(lo)}, {fraction_str(hi)}) pi")
    if args.csv:
        try:
            write_csv(d, _output_path(args.csv))
        except OSError as exc:
            raise DescriptorError(f"{args.csv}: {exc.strerror or exc}") from exc
    if args.closed_form is not None:
        match = d.profile == closed_form_dn(args.closed_form).profile
        print("EXACT MATCH" if match else "MISMATCH")
        return EXIT_OK if match else EXIT_FALSE
    return EXIT_OK


def cmd_classify(args) -> int:
    w, data = load_descriptor(args.file)
    stamp = data.get("verified")
    trusted = isinstance(stamp, dict) and stamp.get("sha256") == fingerprint(w)
    if not trusted:
        if not args.force_verify:
            raise UsageError(f"{args.file} is not verified; run 'snwave verify --record' first or pass --force-verify")
        if not verify(w).ok:
            print(json.dumps({"class": "not-a-wavelet", "witnesses": []}))
            return EXIT_FALSE
    label = classify(w, max_k=args.max_class + 1, verified=True)
    print(json.dumps(label.to_json()))
    return EXIT_FALSE if label.kind == "inconclusive" else EXIT_OK


def cmd_sample(args) -> int:
    w, _ = load_descriptor(args.file)
    lo, hi = args.range
    if not lo < hi:
        raise UsageError("--range needs A < B")
    try:
        samples = sample_time(w, lo, hi, args.points)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.csv:
        try:
            write_samples(samples, _output_path(args.csv))
        except OSError as exc:
            raise DescriptorError(f"{args.csv}: {exc.strerror or exc}") from exc
        print(f"wrote {args.points} samples (real={str(samples.real).lower()})")
    else:
        print("x,re,im")
        for x, re, im in samples.to_rows():
            print(f"{x:.17g},{re:.17g},{im:.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snwave", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a wavelet descriptor")
    p.add_argument("--family", required=True, choices=FAMILIES + ("custom", "random"))
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--bell", help="StepProfile JSON of b^2 on [e_n, b_n) (custom family)")
    p.add_argument("--seed", type=int)
    p.add_argument("--kind", choices=("valid", "broken-iii", "broken-v"))
    p.add_argument("--even", action="store_true", help="random family: mirror the bell so |psi_hat| is even")
    p.add_argument("--notes")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="exact orthonormal-wavelet verification")
    p.add_argument("file")
    p.add_argument("--record", action="store_true", help="mark the descriptor as verified (or clear the mark)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dimension", help="dimension function and MRA verdict")
    p.add_argument("file")
    p.add_argument("--closed-form", type=int, metavar="N")
    p.add_argument("--csv", metavar="OUT")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("classify", help="equivalence class M_k / M_inf")
    p.add_argument("file")
    p.add_argument("--max-class", type=int, default=16, metavar="M")
    p.add_argument("--force-verify", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sample", help="sample psi(x)")
    p.add_argument("file")
    p.add_argument("--range", nargs=2, type=float, metavar=("A", "B"), default=(-20.0, 20.0))
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--csv", metavar="OUT")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"snwave {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DescriptorError as exc:
        print(f"snwave {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
