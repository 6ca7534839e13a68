"""Command-line front end.

Usage::

    covspec classify  (--spectrum JSON | --matrix FILE)
    covspec decompose --matrix FILE
    covspec witness   --spectrum JSON [--matrix FILE]
    covspec sample    --target CLASS --modes S [--count N] [--with-matrix]
    covspec verify    [--scale X]

Common options: ``--tol-sym``, ``--tol-eig``, ``--tol-degeneracy``, ``--tol-pure``,
``--tol-margin``, ``--seed``, ``--out``, ``--deterministic``, ``--fail-on-negative``.
``$COVSPEC_CONFIG`` may name a JSON file with default tolerances and seed.

Exit codes: 0 success, 1 a ``not_in`` verdict under ``--fail-on-negative`` (or a
failed ``verify`` suite), 2 invalid input, 3 inconclusive or tolerance-sensitive.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import __version__
from . import serialize as ser
from .checks import run_all
from .classify import Membership, classify_spectrum
from .config import load_config
from .errors import (AmbiguousPairingError, ConditioningError, CovspecError, InconclusiveError,
                     SamplingExhausted)
from .pairing import classify_pairing, diagonal_representative, eigenspectrum
from .sampling import ClassTarget, SampleConfig, haar_orthogonal, random_os, random_spectrum
from .witness import prop1_alternative_cm, thm1_violation_witness, trivial_witness

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_TOL_FLAGS = {
    "tol_sym": "sym_tol",
    "tol_eig": "eig_tol",
    "tol_degeneracy": "degeneracy_rel_tol",
    "tol_pure": "pure_pair_tol",
    "tol_margin": "witness_margin",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-sym", type=float, help="symmetrization tolerance")
    p.add_argument("--tol-eig", type=float, help="slack of the uncertainty test")
    p.add_argument("--tol-degeneracy", type=float, help="relative gap for equal eigenvalues")
    p.add_argument("--tol-pure", type=float, help="band around 1 for pure pair products")
    p.add_argument("--tol-margin", type=float, help="certification margin below determinant 1")
    p.add_argument("--seed", type=int, help="RNG seed (overrides the config file)")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--deterministic", action="store_true", help="omit the timestamp field")
    p.add_argument("--fail-on-negative", action="store_true", help="exit 1 on a not_in verdict")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covspec", description="Eigenspectrum classification of Gaussian CMs.")
    parser.add_argument("--version", action="version", version=f"covspec {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("classify", help="membership verdict for a spectrum or a matrix")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spectrum", help="JSON list/object of eigenvalues, or a file holding it")
    src.add_argument("--matrix", help="matrix JSON file (or inline JSON)")
    _common(p)

    p = sub.add_parser("decompose", help="Williamson and Euler factors of a CM")
    p.add_argument("--matrix", required=True, help="matrix JSON file (or inline JSON)")
    _common(p)

    p = sub.add_parser("witness", help="certificate backing the verdict")
    p.add_argument("--spectrum", required=True, help="JSON list/object of eigenvalues, or a file holding it")
    p.add_argument("--matrix", help="orthogonal matrix to attack; Haar random from --seed if omitted")
    _common(p)

    p = sub.add_parser("sample", help="JSON lines of random spectra from a class")
    p.add_argument("--target", required=True, choices=[t.value for t in ClassTarget])
    p.add_argument("--modes", "-S", type=int, required=True, help="number of modes")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--max-rejections", type=int, default=10_000)
    p.add_argument("--with-matrix", action="store_true", help="add a random OS conjugate of the diagonal CM")
    _common(p)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--scale", type=float, default=1.0, help="fraction of the full draw counts")
    _common(p)
    return parser


def _read_json(value: str):
    """Inline JSON, or the contents of the file named by ``value``."""
    text = value
    if os.path.isfile(value):
        with open(value, encoding="utf-8") as fh:
            text = fh.read()
    return ser.loads(text)


def _meta(args) -> dict:
    out = {"version": __version__}
    if not args.deterministic:
        out["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return out


def _emit(args, payload, lines=False) -> None:
    text = "\n".join(json.dumps(p, allow_nan=False) for p in payload) if lines else ser.dumps(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cmd_classify(args, tol, seed):
    if args.spectrum is not None:
        lam = ser.spectrum_from_json(_read_json(args.spectrum))
    else:
        lam = eigenspectrum(ser.matrix_from_json(_read_json(args.matrix)))
    verdict = classify_spectrum(lam, tol)
    report = {**ser.verdict_to_json(verdict), "spectrum": ser.spectrum_to_json(lam),
              "pairing": ser.pairing_to_json(classify_pairing(lam, tol)), **_meta(args)}
    _emit(args, report)
    if verdict.tolerance_sensitive or verdict.p1 is Membership.UNDETERMINED:
        return EXIT_INCONCLUSIVE
    if args.fail_on_negative and Membership.NOT_IN in (verdict.p1, verdict.p2):
        return EXIT_NEGATIVE
    return EXIT_OK


def _cmd_decompose(args, tol, seed):
    G = ser.matrix_from_json(_read_json(args.matrix))
    _emit(args, {**ser.decomposition_to_json(G, tol), **_meta(args)})
    return EXIT_OK


def _cmd_witness(args, tol, seed):
    lam = ser.spectrum_from_json(_read_json(args.spectrum))
    verdict = classify_spectrum(lam, tol)
    hint = verdict.witness_hint
    if hint is None:
        raise CovspecError(f"no witness construction applies to verdict reason {verdict.reason.value}")
    if hint == "prop1":
        w = prop1_alternative_cm(lam, tol)
    else:
        if args.matrix:
            O = np.asarray(ser.matrix_from_json(_read_json(args.matrix)))
        else:
            O = haar_orthogonal(2 * lam.S, seed)
        if verdict.case is not None:
            w = thm1_violation_witness(lam, O, tol)
        else:
            w = trivial_witness(lam, O, tol)
    _emit(args, {**ser.witness_to_json(w), "verdict": ser.verdict_to_json(verdict), **_meta(args)})
    return EXIT_OK


def _cmd_sample(args, tol, seed):
    cfg = SampleConfig(seed=seed, S=args.modes, max_rejections=args.max_rejections, class_target=args.target)
    rows = []
    for k in range(args.count):
        lam = random_spectrum(cfg, stream=k, tol=tol)
        row = {"index": k, "target": cfg.class_target.value, "spectrum": ser.spectrum_to_json(lam)}
        if args.with_matrix:
            K = random_os(lam.S, seed, stream=args.count + k)
            row["matrix"] = ser.matrix_to_json(K.T @ diagonal_representative(lam) @ K)
        rows.append(row)
    _emit(args, rows, lines=True)
    return EXIT_OK


def _cmd_verify(args, tol, seed):
    results = run_all(args.scale, tol)
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} suites passed")
    return EXIT_OK if passed == len(results) else EXIT_NEGATIVE


_COMMANDS = {
    "classify": _cmd_classify,
    "decompose": _cmd_decompose,
    "witness": _cmd_witness,
    "sample": _cmd_sample,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol, cfg_seed = load_config()
        tol = tol.replace(**{field: getattr(args, flag) for flag, field in _TOL_FLAGS.items()})
        seed = args.seed if args.seed is not None else (cfg_seed if cfg_seed is not None else 0)
        return _COMMANDS[args.verb](args, tol, seed)
    except InconclusiveError as exc:
        print(f"covspec: inconclusive: {exc}", file=sys.stderr)
        for step in exc.trace:
            print(f"  {step}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ConditioningError, SamplingExhausted) as exc:
        print(f"covspec: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except AmbiguousPairingError as exc:
        print(f"covspec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CovspecError, OSError) as exc:
        print(f"covspec: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
