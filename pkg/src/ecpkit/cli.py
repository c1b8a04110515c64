"""Command-line front end.

Exit codes: 0 success, 2 malformed input or parameters, 3 decoding failure.
Every randomized command needs ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import codes, distinguish, families, linalg, pkc
from .codes import LinearCode
from .ecp import EcpPair
from .field import FieldError, field_make, parse_field
from .rng import make_rng

EXIT_OK, EXIT_MALFORMED, EXIT_DECODE = 0, 2, 3
FAMILIES = ("grs", "grs-subcode", "alternant", "goppa", "random-pair")


class UsageError(Exception):
    """Malformed input or parameters (exit 2)."""


class DecodeFailure(Exception):
    """Ciphertext could not be decrypted (exit 3)."""


def _emit(args, text: str) -> None:
    if args.output:
        pkc.atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _need(args, *names) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"family {args.family} needs {', '.join(missing)}")


# -- keygen --------------------------------------------------------------------------

def build_family(args, rng: np.random.Generator):
    """The secret code and its pair for ``args.family``."""
    F = parse_field(args.field)
    fam = args.family
    if fam == "grs":
        _need(args, "n", "k")
        spec = families.GrsSpec(F, families.default_locators(F, args.n),
                                tuple(int(x) for x in F.random(rng, args.n, nonzero=True)), args.k)
        return families.grs_code(spec), families.grs_ecp(spec)
    if fam == "grs-subcode":
        _need(args, "n", "k", "l")
        a = families.default_locators(F, args.n)
        b = tuple(int(x) for x in F.random(rng, args.n, nonzero=True))
        C = families.random_grs_subcode(F, a, b, args.l, args.k, rng)
        return C, families.grs_ecp(families.GrsSpec(F, a, b, args.l))
    if fam in ("alternant", "goppa"):
        _need(args, "n", "r")
        base = parse_field(args.base) if args.base else field_make(F.p)
        if fam == "alternant":
            if args.n > F.q - 1:
                raise UsageError(f"at most {F.q - 1} nonzero locators in {F}")
            a = tuple(range(1, args.n + 1))
            b = (tuple(int(x) for x in F.random(rng, args.n, nonzero=True))
                 if args.random_multipliers else (1,) * args.n)
            C, pair = families.alternant_code(F, a, b, args.r, base)
        else:
            a = families.default_locators(F, args.n)
            while True:
                g = [int(x) for x in F.random(rng, args.r)] + [1]
                if not np.any(families.poly_eval(F, g, a) == 0):
                    break
            C, pair = families.goppa_code(F, a, g, base)
        if pair is None:
            raise UsageError("r must be at least 2")
        return C, pair
    if fam == "random-pair":
        _need(args, "n", "t")
        A, B, C = families.random_pair_code(F, args.n, args.t, rng)
        return C, EcpPair(A, B, args.t)
    raise UsageError(f"unknown family {fam!r}")


def cmd_keygen(args) -> int:
    rng = make_rng(args.seed)
    C, pair = build_family(args, rng)
    if C.k == 0:
        raise UsageError("the construction gave the zero code")
    try:
        kp = pkc.keygen(C, pair, args.scheme, rng, monomial=args.monomial)
    except pkc.PkcError as exc:
        raise UsageError(str(exc)) from None
    pkc.write_key(args.public, kp.public)
    pkc.write_key(args.secret, kp.secret)
    summary = {"family": args.family, "scheme": args.scheme, "q": C.field.q,
               "field": C.field.to_string(), "n": C.n, "k": C.k, "t": pair.t,
               "public": args.public, "secret": args.secret}
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


# -- encrypt / decrypt -------------------------------------------------------------

def _load(path: str):
    try:
        return pkc.load_key(_read(path))
    except pkc.KeyFormatError as exc:
        raise UsageError(str(exc)) from None


def cmd_encrypt(args) -> int:
    pk = _load(args.key)
    if not isinstance(pk, pkc.PublicKey):
        raise UsageError("encrypt needs a public key")
    vec = linalg.parse_vector(pk.field, _read(args.message))
    if pk.scheme == "mceliece":
        if args.seed is None:
            raise UsageError("McEliece encryption draws a random error: --seed is required")
        ct = pkc.mceliece_encrypt(pk, vec, rng=make_rng(args.seed))
    else:
        ct = pkc.niederreiter_encrypt(pk, vec)
    _emit(args, ct.to_text(pk.field) + "\n")
    return EXIT_OK


def cmd_decrypt(args) -> int:
    sk = _load(args.key)
    if not isinstance(sk, pkc.SecretKey):
        raise UsageError("decrypt needs a secret key")
    try:
        ct = pkc.Ciphertext.from_text(sk.field, _read(args.ciphertext))
    except pkc.PkcError as exc:
        raise UsageError(str(exc)) from None
    if ct.scheme != sk.scheme:
        raise UsageError(f"{ct.scheme} ciphertext given to a {sk.scheme} key")
    if sk.scheme == "mceliece":
        out = pkc.mceliece_decrypt(sk, ct)
        plain = None if out is None else out[0]
    else:
        plain = pkc.niederreiter_decrypt(sk, ct)
    if plain is None:
        raise DecodeFailure("decryption failed: more than t errors or not a valid ciphertext")
    _emit(args, linalg.format_vector(sk.field, plain) + "\n")
    return EXIT_OK


# -- distinguish -------------------------------------------------------------------

def _load_code(args) -> LinearCode:
    text = _read(args.input)
    if text.lstrip().startswith("{"):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"not valid JSON: {exc}") from None
        if "generator" in d:
            return LinearCode.from_dict(d)
        key = _load(args.input)
        if isinstance(key, pkc.SecretKey):
            key = key.public_key()
        C = LinearCode(key.field, key.n, key.matrix)
        return C if key.scheme == "mceliece" else codes.dual(C)
    if not args.field:
        raise UsageError("a bare generator matrix needs --field")
    F = parse_field(args.field)
    G = linalg.parse_matrix(F, text)
    return LinearCode(F, G.shape[1], G)


def cmd_distinguish(args) -> int:
    C = _load_code(args)
    if C.k == 0:
        raise UsageError("zero code")
    report = distinguish.classify(C)
    _emit(args, json.dumps(report.to_dict(), sort_keys=True) + "\n")
    return EXIT_OK


# -- experiments -------------------------------------------------------------------

def cmd_experiment(args) -> int:
    kind = args.experiment
    try:
        if kind == "prop1-sweep":
            res = distinguish.experiment_prop1_sweep(args.trials, args.seed)
        else:
            F = parse_field(args.field)
            if kind == "square-dim":
                res = distinguish.experiment_square_dim(F, args.n, args.k, args.trials, args.seed)
            elif kind == "star-rank":
                res = distinguish.experiment_star_rank(F, args.n, args.s, args.t, args.trials, args.seed)
            else:
                res = distinguish.experiment_decode_rate(F, args.n, args.k, args.weight,
                                                         args.trials, args.seed)
    except distinguish.DistinguishError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        text = res.to_csv()
    else:
        text = json.dumps({"experiment": res.name, "rows": res.rows,
                           "histogram": {str(k): v for k, v in res.histogram.items()}},
                          sort_keys=True) + "\n"
    _emit(args, text)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ecpkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="generate a key pair from a code family")
    kg.add_argument("--family", choices=FAMILIES, required=True)
    kg.add_argument("--field", required=True, help="p:e[:modulus] or q")
    kg.add_argument("--base", help="subfield for alternant/goppa (default GF(p))")
    for name in ("n", "k", "t", "l", "r"):
        kg.add_argument(f"--{name}", type=int)
    kg.add_argument("--random-multipliers", action="store_true",
                    help="alternant: random column multipliers instead of all ones")
    kg.add_argument("--scheme", choices=pkc.SCHEMES, default="mceliece")
    kg.add_argument("--monomial", action="store_true", help="monomial instead of permutation P")
    kg.add_argument("--seed", type=int, required=True)
    kg.add_argument("--public", default="key.pub.json")
    kg.add_argument("--secret", default="key.sec.json")
    kg.set_defaults(func=cmd_keygen)

    en = sub.add_parser("encrypt", help="encrypt a message file with a public key")
    en.add_argument("--key", required=True)
    en.add_argument("--message", required=True)
    en.add_argument("--seed", type=int)
    en.add_argument("--output")
    en.set_defaults(func=cmd_encrypt)

    de = sub.add_parser("decrypt", help="decrypt a ciphertext file with a secret key")
    de.add_argument("--key", required=True)
    de.add_argument("--ciphertext", required=True)
    de.add_argument("--output")
    de.set_defaults(func=cmd_decrypt)

    di = sub.add_parser("distinguish", help="square-code report for a code or public key")
    di.add_argument("--input", required=True, help="key JSON, code JSON or matrix text")
    di.add_argument("--field", help="field of a bare matrix")
    di.add_argument("--format", choices=("json",), default="json")
    di.add_argument("--output")
    di.set_defaults(func=cmd_distinguish)

    ex = sub.add_parser("experiment", help="seeded Monte Carlo experiments")
    exs = ex.add_subparsers(dest="experiment", required=True)
    specs = {
        "square-dim": ("field", "n", "k"),
        "star-rank": ("field", "n", "s", "t"),
        "decode-rate": ("field", "n", "k", "weight"),
        "prop1-sweep": (),
    }
    for name, needs in specs.items():
        p = exs.add_parser(name)
        for arg in needs:
            p.add_argument(f"--{arg}", required=True, type=str if arg == "field" else int)
        p.add_argument("--trials", type=int, required=True)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output")
        p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit 2, --help exits 0
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DecodeFailure as exc:
        print(f"ecpkit: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except (UsageError, FieldError, pkc.PkcError, codes.CodeError,
            families.FamilyError, linalg.LinalgError, ValueError) as exc:
        print(f"ecpkit: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
