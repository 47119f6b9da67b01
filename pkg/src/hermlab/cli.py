"""Command-line front end.

Verbs: compute orbit-sum polynomials, evaluate the explicit values and their
closed forms, run the quadrature suites, drive the residue-model laboratory,
and run the named verification checks as a consolidated report.

Exit codes: 0 all requested work passed; 1 a mathematical check failed;
2 usage or configuration error; 3 a resource or precision limit was hit.
Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .hall_littlewood import p_poly, q_poly
from .padic import (
    LocalField,
    LocalMatrix,
    PrecisionError,
    ResourceLimit,
    classify_g_orbit,
    classify_k_orbit,
    diagonalize_x1,
    invariant_factors,
    is_member_X,
    monte_carlo_omega1,
    norm_count,
    random_k,
    x_lambda,
)
from .plancherel import (
    basis_partitions,
    basis_rank_check,
    check_inversion,
    check_plancherel,
    gram_matrix,
)
from .report import CHECKS, RunConfig, run_checks
from .scalars import InexactDivision, QFraction, QLaurent
from .spherical import (
    check_functional_equation,
    omega_explicit,
    omega_rank1_s_form,
    parity_sign_relation,
)

EXIT_PASS = 0
EXIT_MATH_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _parse_partition(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        parts = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise SystemExit(EXIT_USAGE)
    return parts


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SystemExit(EXIT_USAGE)


def _format_complex(z: complex, digits: int = 12) -> str:
    re = f"{z.real:.{digits}g}"
    im = f"{abs(z.imag):.{digits}g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{re}{sign}{im}i"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_config_file(path: str) -> dict:
    """Plain key = value lines; # starts a comment."""
    values: dict[str, str] = {}
    try:
        with open(path) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise SystemExit(EXIT_USAGE)
                key, val = line.split("=", 1)
                key = key.strip().replace("-", "_").lower()
                if key not in _CONFIG_KEYS:
                    sys.stderr.write(f"unknown config key: {key}\n")
                    raise SystemExit(EXIT_USAGE)
                values[key] = val.strip()
    except OSError:
        raise SystemExit(EXIT_USAGE)
    return values


_CONFIG_KEYS = {
    "n": int,
    "q0": Fraction,
    "p": int,
    "seed": int,
    "grid_n": int,
    "prec": int,
    "samples": int,
    "tol": float,
    "format": str,
    "workers": int,
}


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="hermlab")
    sub = top.add_subparsers(dest="command", required=True)

    ver = sub.add_parser("verify", help="run named checks and emit a report")
    ver.add_argument("checks", help="'all' or a comma-joined list of check ids")
    ver.add_argument("--n", type=int, default=None)
    ver.add_argument("--q", "--q0", dest="q0", default=None)
    ver.add_argument("--p", type=int, default=None)
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--grid-N", dest="grid_n", type=int, default=None)
    ver.add_argument("--prec", type=int, default=None)
    ver.add_argument("--samples", type=int, default=None)
    ver.add_argument("--tol", type=float, default=None)
    ver.add_argument("--format", choices=("text", "json", "csv"), default=None)
    ver.add_argument("--workers", type=int, default=None)
    ver.add_argument("--config", default=None, help="key = value defaults; flags win")
    ver.add_argument("--out", default=None)

    hl = sub.add_parser("hl", help="orbit-sum polynomials")
    hls = hl.add_subparsers(dest="subcommand", required=True)
    qp = hls.add_parser("qpoly")
    qp.add_argument("--n", type=int, required=True)
    qp.add_argument("--parity", choices=("odd", "even"), required=True)
    qp.add_argument("--lambda", dest="lam", required=True)
    qp.add_argument("--normalized", action="store_true", help="unit top coefficient")
    qp.add_argument("--format", choices=("text", "json"), default="text")
    qp.add_argument("--out", default=None)

    sph = sub.add_parser("sph", help="spherical values")
    sphs = sph.add_subparsers(dest="subcommand", required=True)
    om = sphs.add_parser("omega")
    om.add_argument("--ell", type=int, default=None, help="rank-one closed form")
    om.add_argument("--s", type=int, default=None, help="integer exponent, u = q^-s")
    om.add_argument("--n", type=int, default=None)
    om.add_argument("--parity", choices=("odd", "even"), default="odd")
    om.add_argument("--lambda", dest="lam", default=None)
    om.add_argument("--x", default=None, help="comma-joined rational coordinates")
    om.add_argument("--out", default=None)
    fe = sphs.add_parser("verify-feq")
    fe.add_argument("--n", type=int, required=True)
    fe.add_argument("--parity", choices=("odd", "even"), required=True)
    fe.add_argument("--lambda", dest="lam", required=True)
    fe.add_argument("--trials", type=int, default=5)
    fe.add_argument("--seed", type=int, default=7)
    ps = sphs.add_parser("parity-sign")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--lambda", dest="lam", required=True)
    ps.add_argument("--seed", type=int, default=7)

    pl = sub.add_parser("plancherel", help="measure, transforms, inversion")
    pls = pl.add_subparsers(dest="subcommand", required=True)
    for name in ("gram", "check", "inversion"):
        pp = pls.add_parser(name)
        pp.add_argument("--n", type=int, required=True)
        pp.add_argument("--parity", choices=("odd", "even"), required=True)
        pp.add_argument("--q0", default="3")
        pp.add_argument("--grid-N", dest="grid_n", type=int, default=64)
        pp.add_argument("--weight", type=int, default=2, help="max partition weight")
        pp.add_argument("--tol", type=float, default=1e-8)
        pp.add_argument("--out", default=None)
    rk = pls.add_parser("rank")
    rk.add_argument("--n", type=int, required=True)
    rk.add_argument("--parity", choices=("odd", "even"), required=True)
    rk.add_argument("--q0", default="3")
    rk.add_argument("--seed", type=int, default=7)
    rk.add_argument("--trials", type=int, default=5)

    pa = sub.add_parser("padic", help="residue-model laboratory")
    pas = pa.add_subparsers(dest="subcommand", required=True)
    cn = pas.add_parser("count-norm")
    cn.add_argument("--p", type=int, required=True)
    cn.add_argument("--xi", type=int, required=True)
    cn.add_argument("--r", type=int, required=True)
    cl = pas.add_parser("classify")
    cl.add_argument("--p", type=int, default=3)
    cl.add_argument("--in", dest="infile", default=None, help="matrix as JSON")
    cl.add_argument("--n", type=int, default=1)
    cl.add_argument("--lambda", dest="lam", default=None)
    cl.add_argument("--seed", type=int, default=7)
    dg = pas.add_parser("diagonalize1")
    dg.add_argument("--p", type=int, default=3)
    dg.add_argument("--in", dest="infile", default=None, help="matrix as JSON")
    dg.add_argument("--ell", type=int, default=None)
    dg.add_argument("--seed", type=int, default=7)
    dg.add_argument("--prec", type=int, default=12)
    dg.add_argument("--out", default=None, help="write the reducing element as JSON")
    mc = pas.add_parser("mc-omega")
    mc.add_argument("--p", type=int, default=3)
    mc.add_argument("--ell", type=int, required=True)
    mc.add_argument("--s", type=float, required=True)
    mc.add_argument("--samples", type=int, default=10000)
    mc.add_argument("--prec", type=int, default=8)
    mc.add_argument("--seed", type=int, default=7)

    return top


# -- verb handlers --------------------------------------------------------------------


def _cmd_verify(args) -> int:
    values = _read_config_file(args.config) if args.config else {}
    merged = {}
    for key, conv in _CONFIG_KEYS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = conv(flag)
        elif key in values:
            try:
                merged[key] = conv(values[key])
            except ValueError:
                raise SystemExit(EXIT_USAGE)
    fmt = merged.pop("format", "text")
    workers = merged.pop("workers", None)
    if workers is None:
        env = os.environ.get("HERMLAB_WORKERS")
        workers = int(env) if env else (os.cpu_count() or 1)
    cfg = RunConfig(**merged)
    if args.checks == "all":
        ids = list(CHECKS)
    else:
        ids = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in ids if c not in CHECKS]
        if unknown:
            sys.stderr.write(f"unknown checks: {', '.join(unknown)}\n")
            return EXIT_USAGE
    report = run_checks(ids, cfg, workers=min(workers, len(ids)))
    _emit(report.render(fmt), args.out)
    return EXIT_PASS if report.passed else EXIT_MATH_FAIL


def _cmd_hl_qpoly(args) -> int:
    lam = _parse_partition(args.lam)
    poly = (p_poly if args.normalized else q_poly)(args.n, args.parity, lam)
    if args.format == "json":
        _emit(json.dumps(poly.to_json_dict(), sort_keys=True) + "\n", args.out)
    else:
        _emit(str(poly) + "\n", args.out)
    return EXIT_PASS


def _cmd_sph_omega(args) -> int:
    if args.ell is not None:
        if args.s is None:
            sys.stderr.write("rank-one closed form needs --s\n")
            return EXIT_USAGE
        q = QLaurent.gen()
        val = omega_rank1_s_form(args.ell, QFraction(q ** (-args.s)))
        _emit(str(val) + "\n", args.out)
        return EXIT_PASS
    if args.n is None or args.lam is None:
        sys.stderr.write("general evaluation needs --n and --lambda\n")
        return EXIT_USAGE
    lam = _parse_partition(args.lam)
    value = omega_explicit(args.n, args.parity, lam)
    if args.x is None:
        _emit(
            f"prefactor: {value.prefactor}\nnumerator: {value.numerator}\n"
            f"boundary: {value.boundary}\n",
            args.out,
        )
        return EXIT_PASS
    xs = [_parse_fraction(t) for t in args.x.split(",")]
    if len(xs) != args.n:
        return EXIT_USAGE
    _emit(str(value.eval_exact(xs)) + "\n", args.out)
    return EXIT_PASS


def _cmd_sph_feq(args) -> int:
    lam = _parse_partition(args.lam)
    ok = check_functional_equation(args.n, args.parity, lam, trials=args.trials, seed=args.seed)
    print("functional-equation:", "pass" if ok else "fail")
    return EXIT_PASS if ok else EXIT_MATH_FAIL


def _cmd_sph_parity_sign(args) -> int:
    lam = _parse_partition(args.lam)
    want = -1 if sum(lam) % 2 else 1
    got = parity_sign_relation(lam, args.n, seed=args.seed)
    print(f"sign: {got:+d}")
    return EXIT_PASS if got == want else EXIT_MATH_FAIL


def _partitions_to_weight(n: int, weight: int) -> list[tuple[int, ...]]:
    out = []
    for lam in basis_partitions(n):
        if sum(lam) <= weight and lam not in out:
            out.append(lam)
    from .report import _partitions

    for lam in _partitions(n, weight):
        if lam not in out:
            out.append(lam)
    return sorted(out, key=lambda t: (sum(t), t))


def _cmd_plancherel(args) -> int:
    q0 = _parse_fraction(args.q0)
    lams = _partitions_to_weight(args.n, args.weight)
    header = ["partition"] + [",".join(map(str, lam)) or "0" for lam in lams]
    if args.subcommand == "gram":
        mat = gram_matrix(lams, args.n, args.parity, q0, args.grid_n)
        lines = [";".join(header)]
        for i, lam in enumerate(lams):
            cells = [",".join(map(str, lam)) or "0"]
            cells += [_format_complex(mat[i, j]) for j in range(len(lams))]
            lines.append(";".join(cells))
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_PASS
    fn = check_plancherel if args.subcommand == "check" else check_inversion
    out = fn(lams, args.n, args.parity, q0, args.grid_n)
    err = out["max_error"]
    name = "plancherel-diagonal" if args.subcommand == "check" else "inversion"
    ok = err < args.tol
    print(f"{name}: {'pass' if ok else 'fail'} (max error {err:.3e}, tol {args.tol:.1e})")
    return EXIT_PASS if ok else EXIT_MATH_FAIL


def _cmd_plancherel_rank(args) -> int:
    q0 = _parse_fraction(args.q0)
    out = basis_rank_check(args.n, args.parity, q0, seed=args.seed, trials=args.trials)
    if out["ok"]:
        print(f"basis-rank: pass (least |det| {min(out['dets']):.3e})")
        return EXIT_PASS
    print("basis-rank: fail (singular at a sampled point)")
    return EXIT_MATH_FAIL


def _load_matrix(path: str) -> LocalMatrix:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError):
        raise SystemExit(EXIT_USAGE)
    return LocalMatrix.from_json_dict(payload)


def _cmd_padic(args) -> int:
    if args.subcommand == "count-norm":
        print(norm_count(args.p, args.xi, args.r))
        return EXIT_PASS
    if args.subcommand == "classify":
        if args.infile:
            x = _load_matrix(args.infile)
        else:
            lam = _parse_partition(args.lam) if args.lam else (1,) + (0,) * (args.n - 1)
            field = LocalField(args.p)
            k = random_k(field, args.n, seed=args.seed)
            x = k.act(x_lambda(field, args.n, lam))
        member = is_member_X(x) if x.model == "exact" else None
        if member is not None:
            print(f"member: {'yes' if member else 'no'}")
            if not member:
                return EXIT_MATH_FAIL
        facs = invariant_factors(x)
        print("invariant factors:", ",".join(map(str, facs)))
        print("orbit:", ",".join(map(str, classify_k_orbit(x))))
        print("full-group class:", classify_g_orbit(x))
        return EXIT_PASS
    if args.subcommand == "diagonalize1":
        if args.infile:
            x = _load_matrix(args.infile)
        else:
            if args.ell is None:
                sys.stderr.write("need --in or --ell\n")
                return EXIT_USAGE
            field = LocalField(args.p)
            k0 = random_k(field, 1, seed=args.seed)
            x = k0.act(x_lambda(field, 1, (args.ell,)))
        k, ell = diagonalize_x1(x, prec=args.prec)
        print("orbit index:", ell)
        print("certified precision:", k.precision)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(k.to_json_dict(), fh, sort_keys=True)
                fh.write("\n")
        return EXIT_PASS
    if args.subcommand == "mc-omega":
        out = monte_carlo_omega1(
            args.ell, args.s, args.samples, args.prec, seed=args.seed, p=args.p
        )
        err = abs(out["estimate"] - out["closed_form"])
        band = 3 * out["stderr"] + 1e-12
        print(f"estimate: {out['estimate']:.6f}")
        print(f"stderr: {out['stderr']:.6f}")
        print(f"closed form: {out['closed_form']:.6f}")
        print(f"replaced draws: {out['saturated']}")
        ok = err < band
        print("agreement:", "pass" if ok else "fail")
        return EXIT_PASS if ok else EXIT_MATH_FAIL
    return EXIT_USAGE  # pragma: no cover - argparse guards subcommands


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "hl":
            return _cmd_hl_qpoly(args)
        if args.command == "sph":
            if args.subcommand == "omega":
                return _cmd_sph_omega(args)
            if args.subcommand == "verify-feq":
                return _cmd_sph_feq(args)
            return _cmd_sph_parity_sign(args)
        if args.command == "plancherel":
            if args.subcommand == "rank":
                return _cmd_plancherel_rank(args)
            return _cmd_plancherel(args)
        if args.command == "padic":
            return _cmd_padic(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except (PrecisionError, ResourceLimit) as e:
        sys.stderr.write(f"resource/precision: {e}\n")
        return EXIT_RESOURCE
    except InexactDivision as e:
        sys.stderr.write(f"inexact: {e}\n")
        return EXIT_MATH_FAIL
    except (ValueError, KeyError, AssertionError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_MATH_FAIL
    return EXIT_USAGE  # pragma: no cover - unreachable


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
