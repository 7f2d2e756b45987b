"""Command-line front end.

All numeric input and output is carried as decimal strings, including inside
JSON documents, so values survive round trips through tools that would
truncate large integers to doubles.

Exit codes: 0 success, 1 verification failure, 2 invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .exact import largest_prime_factor
from .quadratic import QuadraticGenerator
from .lattice import (
    Basis,
    DecompositionProblem,
    babai_decompose,
    basis_det,
    gauss_reduce,
    membership,
    norm_bits,
    shrink_to_order,
)
from .builders import (
    basis_from_json,
    basis_to_json,
    bound_csq,
    bound_trivial,
    ec2d_basis,
    g2_validate,
    g2rm_basis,
    gi_basis,
    glvgls_basis,
    gls_basis,
    qcurve_basis,
)
from .curves import (
    CurveInstance,
    Field,
    naive_count,
    decomposed_mul,
    scalar_mul,
)
from . import instances


class ParameterError(Exception):
    """Bad arguments discovered after parsing; maps to exit code 2."""


class VerificationFailure(Exception):
    """A property check failed on a concrete instance; exit code 1."""


def _read_basis(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return basis_from_json(fh.read())


def _problem(args) -> DecompositionProblem:
    eigenvalues = tuple(int(s) for s in args.eigenvalues.split(",")) if args.eigenvalues else ()
    return DecompositionProblem(int(args.modulus), eigenvalues)


def _phi(args) -> QuadraticGenerator:
    return QuadraticGenerator(int(args.tphi), int(args.nphi))


def cmd_basis(args) -> int:
    scheme = args.scheme
    if scheme == "glv":
        basis = ec2d_basis(int(args.b), int(args.c), _phi(args))
    elif scheme == "gls":
        basis = gls_basis(int(args.p), int(args.t0))
    elif scheme == "qcurve":
        basis = qcurve_basis(int(args.p), int(args.d), int(args.eps), int(args.r))
    elif scheme == "glvgls":
        basis = glvgls_basis(int(args.b), int(args.c), _phi(args))
    elif scheme == "gi":
        basis = gi_basis(int(args.b), int(args.c), _phi(args), int(args.d), int(args.sign))
    elif scheme == "g2rm":
        basis = g2rm_basis(int(args.q), int(args.b), int(args.c), _phi(args))
    else:  # pragma: no cover - argparse restricts choices
        raise ParameterError(f"unknown scheme {scheme}")
    print(basis_to_json(basis))
    return 0


def cmd_decompose(args) -> int:
    basis, _ = _read_basis(args.basis)
    prob = _problem(args)
    dec = babai_decompose(basis, prob, int(args.m))
    print(json.dumps([str(a) for a in dec.coefficients]))
    return 0


def cmd_reduce(args) -> int:
    basis, prob = _read_basis(args.basis)
    if basis.r != 2:
        raise ParameterError("reduce only handles 2-dimensional bases")
    print(basis_to_json(gauss_reduce(basis), prob))
    return 0


def cmd_shrink(args) -> int:
    basis, _ = _read_basis(args.basis)
    prob = _problem(args)
    print(basis_to_json(shrink_to_order(basis, prob), prob))
    return 0


def cmd_count(args) -> int:
    fld = Field(int(args.p))
    curve = CurveInstance(fld, int(args.a4), int(args.a6))
    print(naive_count(curve))
    return 0


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise VerificationFailure(what)


def _verify_decompositions(inst, samples: int, rng: random.Random) -> int:
    """Random scalars: congruence, infinity-norm bound, curve agreement."""
    n = inst.prob.modulus
    half_r = inst.prob.r  # bound is (r/2) * max, doubled to stay integral
    max_row = max(abs(e) for row in inst.basis.rows for e in row)
    worst = 0
    for _ in range(samples):
        m = rng.randrange(n)
        dec = babai_decompose(inst.basis, inst.prob, m)
        a = dec.coefficients
        acc = a[0] + sum(x * l for x, l in zip(a[1:], inst.prob.eigenvalues))
        _check(acc % n == m % n, f"decomposition congruence fails for m={m}")
        _check(
            2 * max(abs(x) for x in a) <= half_r * max_row,
            f"infinity norm bound fails for m={m}",
        )
        got = decomposed_mul(m, inst.point, inst.basis, inst.prob, list(inst.endos))
        want = scalar_mul(m % n, inst.point)
        _check(got == want, f"decomposed multiplication disagrees for m={m}")
        worst = max(worst, dec.max_bits())
    return worst


def cmd_verify(args) -> int:
    rng = random.Random(args.seed)
    samples = args.samples
    scheme = args.scheme
    if scheme == "gls":
        p_in = int(args.p)
        if args.a4 is not None and args.a6 is not None:
            from dataclasses import replace

            curve = CurveInstance(Field(p_in), int(args.a4), int(args.a6))
            base = replace(curve, order=naive_count(curve))
        else:
            base, _ = instances.random_gls_base(p_in, rng)
        inst = instances.gls_instance(base, rng)
        p, t0 = inst.params["p"], inst.params["t0"]
        full = gls_basis(p, t0)
        r1, r2 = full.rows[0], full.rows[1]
        _check(sum(x * y for x, y in zip(r1, r2)) == 0, "rows are not orthogonal")
        _check(
            abs(basis_det(full)) == (p - 1) ** 2 + t0 * t0,
            "determinant identity fails",
        )
        _verify_decompositions(inst, samples, rng)
    elif scheme == "glv":
        inst = instances.glv_instance(args.curve_id, int(args.q), rng)
        _check(
            abs(basis_det(inst.basis)) == inst.params["order"],
            "determinant does not match the point count",
        )
        _verify_decompositions(inst, samples, rng)
    elif scheme == "glvgls":
        inst = instances.glvgls_instance(int(args.p), rng)
        p, t0 = inst.params["p"], inst.params["t0"]
        _check(
            abs(basis_det(inst.basis)) == (p - 1) ** 2 + t0 * t0,
            "4x4 determinant identity fails",
        )
        for row in inst.basis:
            _check(membership(row, inst.prob), f"row {row} is not in the lattice")
        _verify_decompositions(inst, samples, rng)
    elif scheme == "qcurve":
        from .builders import QCurveScheme

        sch = QCurveScheme(int(args.p), int(args.d), int(args.eps), int(args.r))
        basis = sch.build()
        _check(
            abs(basis_det(basis)) == sch.p**2 + 1 - sch.trace,
            "determinant identity fails",
        )
        done = 0
        for _ in range(samples):
            prob = instances.qcurve_problem(sch, rng)
            if prob is None:
                continue
            lam = prob.eigenvalues[0]
            _check(
                (lam * lam - sch.eps * sch.d) % prob.modulus == 0,
                "eigenvalue square identity fails",
            )
            for row in basis:
                _check(membership(row, prob), f"row {row} not in the lattice")
            done += 1
        _check(done > 0, "no admissible subgroup order below the bound")
    elif scheme == "gi":
        from .builders import GIScheme

        sch = GIScheme(
            int(args.b), int(args.c), int(args.tphi), int(args.nphi),
            int(args.d), int(args.sign),
        )
        basis = sch.build()
        done = 0
        for _ in range(samples):
            prob = instances.gi_problem(sch, rng)
            if prob is None:
                continue
            lam_psi = prob.eigenvalues[1]
            _check(
                (lam_psi**2 - sch.sign * sch.d) % prob.modulus == 0,
                "eigenvalue square identity fails",
            )
            for row in basis:
                _check(membership(row, prob), f"row {row} not in the lattice")
            done += 1
        _check(done > 0, "no admissible subgroup order for these parameters")
    elif scheme == "g2rm":
        phi = _phi(args)
        q, b, c = int(args.q), int(args.b), int(args.c)
        s = c * phi.trace + 2 * b
        n_pi = b * s - b * b + c * c * phi.norm
        _check(g2_validate(q, s, n_pi), "(s, n_pi) fails the surface constraints")
        basis = g2rm_basis(q, b, c, phi)
        det = (q + 1) ** 2 - s * (q + 1) + n_pi
        _check(abs(basis_det(basis)) == det, "determinant identity fails")
        from .builders import G2RMScheme

        sch = G2RMScheme(q, s, n_pi, b, c, phi.trace, phi.norm)
        prob = instances.g2rm_problem(sch, rng)
        _check(prob is not None, "no usable prime divides the order")
        for row in basis:
            _check(membership(row, prob), f"row {row} not in the lattice")
    else:  # pragma: no cover
        raise ParameterError(f"unknown scheme {scheme}")
    print("ok")
    return 0


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    scheme = args.scheme
    trials = args.trials
    bits_list: list[int] = []
    report: dict = {"scheme": scheme, "bits": args.bits, "trials": trials}

    if scheme in ("gls", "glv", "glvgls"):
        if scheme == "gls":
            p = _random_prime(rng, args.bits)
            base, _ = instances.random_gls_base(p, rng)
            inst = instances.gls_instance(base, rng)
            phi_gen = QuadraticGenerator(inst.params["t0"], p)
            q = p * p
            t_e = 2 * p - inst.params["t0"] ** 2
        elif scheme == "glv":
            curve_id = args.curve_id or "j1728"
            q = instances.admissible_primes(curve_id, 1, 1 << (args.bits - 1))[0]
            inst = instances.glv_instance(curve_id, q, rng)
            phi_gen = inst.endos[0].char_poly
            t_e = inst.params["t_e"]
        else:
            p = _random_prime(rng, args.bits, lambda x: x % 4 == 1)
            inst = instances.glvgls_instance(p, rng)
            phi_gen = QuadraticGenerator(0, 1)
            q = p * p
            t_e = 2 * p - inst.params["t0"] ** 2
        n = inst.prob.modulus
        for _ in range(trials):
            m = rng.randrange(n)
            bits_list.append(babai_decompose(inst.basis, inst.prob, m).max_bits())
        report["modulus"] = str(n)
        report["basis_bits"] = norm_bits(inst.basis)
        report["bound_csq_bits"] = str(float(bound_csq(n, phi_gen)))
        try:
            c_abs, b_bound = bound_trivial(q, t_e, phi_gen)
            report["bound_trivial"] = {"c_abs": str(c_abs), "b_bound": str(b_bound)}
        except ValueError:
            report["bound_trivial"] = None
    elif scheme in ("qcurve", "g2rm", "gi"):
        made = 0
        basis_bits = 0
        while made < trials:
            if scheme == "qcurve":
                sch = instances.random_qcurve_scheme(rng, max(args.bits // 2, 6))
                prob = instances.qcurve_problem(sch, rng)
            elif scheme == "gi":
                sch = instances.random_gi_scheme(rng)
                prob = instances.gi_problem(sch, rng)
            else:
                sch = instances.random_g2rm_scheme(rng, max(args.bits // 2, 6))
                prob = instances.g2rm_problem(sch, rng)
            if prob is None:
                continue
            basis = sch.build()
            m = rng.randrange(prob.modulus)
            bits_list.append(babai_decompose(basis, prob, m).max_bits())
            basis_bits = max(basis_bits, norm_bits(basis))
            made += 1
        report["basis_bits"] = basis_bits
        report["bound_csq_bits"] = None
        report["bound_trivial"] = None
    else:  # pragma: no cover
        raise ParameterError(f"unknown scheme {scheme}")

    report["mean_bits"] = str(sum(bits_list) / len(bits_list))
    report["max_bits"] = max(bits_list)
    print(json.dumps(report))
    return 0


def _random_prime(rng: random.Random, bits: int, extra=None) -> int:
    from .exact import is_prime

    while True:
        p = rng.randrange(1 << (bits - 1), 1 << bits) | 1
        if is_prime(p) and (extra is None or extra(p)):
            return p


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="endobasis")
    sub = top.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", help="emit a ready-made basis as JSON")
    b.add_argument("--scheme", required=True,
                   choices=("glv", "gls", "qcurve", "glvgls", "gi", "g2rm"))
    for flag in ("--p", "--q", "--t0", "--b", "--c", "--tphi", "--nphi",
                 "--d", "--eps", "--r", "--sign"):
        b.add_argument(flag)
    b.set_defaults(func=cmd_basis)

    d = sub.add_parser("decompose", help="Babai-round a scalar against a basis")
    d.add_argument("--basis", required=True)
    d.add_argument("--modulus", required=True)
    d.add_argument("--eigenvalues", default="")
    d.add_argument("--m", required=True)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="run the property suite on one instance")
    v.add_argument("--scheme", required=True,
                   choices=("glv", "gls", "qcurve", "glvgls", "gi", "g2rm"))
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--curve-id", dest="curve_id")
    for flag in ("--p", "--q", "--a4", "--a6", "--t0", "--b", "--c",
                 "--tphi", "--nphi", "--d", "--eps", "--r", "--sign"):
        v.add_argument(flag)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="Gauss-reduce a 2-dimensional basis")
    r.add_argument("--basis", required=True)
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("shrink", help="shrink a basis to the subgroup order")
    s.add_argument("--basis", required=True)
    s.add_argument("--modulus", required=True)
    s.add_argument("--eigenvalues", default="")
    s.set_defaults(func=cmd_shrink)

    c = sub.add_parser("count", help="count points on a curve over F_p")
    c.add_argument("--p", required=True)
    c.add_argument("--a4", required=True)
    c.add_argument("--a6", required=True)
    c.set_defaults(func=cmd_count)

    be = sub.add_parser("bench", help="decomposition bitlength statistics")
    be.add_argument("--scheme", required=True,
                    choices=("glv", "gls", "qcurve", "glvgls", "gi", "g2rm"))
    be.add_argument("--bits", type=int, required=True)
    be.add_argument("--trials", type=int, required=True)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--curve-id", dest="curve_id")
    be.set_defaults(func=cmd_bench)

    return top


def _require(args, names) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_"), None) is None]
    if missing:
        raise ParameterError(f"missing required flags: {', '.join('--' + n for n in missing)}")


_REQUIRED = {
    ("basis", "glv"): ("b", "c", "tphi", "nphi"),
    ("basis", "gls"): ("p", "t0"),
    ("basis", "qcurve"): ("p", "d", "eps", "r"),
    ("basis", "glvgls"): ("b", "c", "tphi", "nphi"),
    ("basis", "gi"): ("b", "c", "tphi", "nphi", "d", "sign"),
    ("basis", "g2rm"): ("q", "b", "c", "tphi", "nphi"),
    ("verify", "glv"): ("curve_id", "q"),
    ("verify", "gls"): ("p",),
    ("verify", "qcurve"): ("p", "d", "eps", "r"),
    ("verify", "glvgls"): ("p",),
    ("verify", "gi"): ("b", "c", "tphi", "nphi", "d", "sign"),
    ("verify", "g2rm"): ("q", "b", "c", "tphi", "nphi"),
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        key = (args.command, getattr(args, "scheme", None))
        if key in _REQUIRED:
            _require(args, _REQUIRED[key])
        return args.func(args)
    except VerificationFailure as err:
        print(f"verification failed: {err}", file=sys.stderr)
        return 1
    except ParameterError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
