"""Command-line surface.

Exit codes: 0 when every check verifies, 1 when a mathematical identity is
violated (a witness is reported), 2 for input, parse or parameter errors.
All randomized suites are seeded; with a fixed seed the emitted report is
byte-identical across runs.  The environment variable COCHAIN_SEED, when
set, overrides any --seed argument.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction
from typing import Optional

from ._kernels import backend_name
from .complexes import (
    CochainElement,
    K as K_space,
    d_G,
    d_G1_explicit,
    d_K,
    phi,
    psi,
    random_K_element,
    skew_reconstruction_residual,
)
from .errors import (
    BadParameter,
    CochainError,
    InvalidMember,
    NotClosed,
    NotConnectionShaped,
    SchemaError,
    SingularMetric,
    SingularPoint,
)
from .poincare import affine_kernel_basis, solve_potential
from .policy import EqualityPolicy
from .report import CheckResult, VerificationReport
from .sexpr import emit_scalar, parse_field
from .spacetime import (
    BUILTIN_NAMES,
    DIM,
    builtin_metric,
    table_report,
    verify_potential,
)
from .tensor_io import dump_tensor, parse_metric, parse_tensor
from .tensors import Tensor


def _seed(args) -> int:
    env = os.environ.get("COCHAIN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise BadParameter("COCHAIN_SEED must be an integer")
    return args.seed


def _print_report(report: VerificationReport, args) -> int:
    if getattr(args, "json", False):
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render_text())
    return 0 if report.overall else 1


def _tensor_residual(t: Tensor) -> tuple[float, Optional[dict]]:
    """Worst coefficient of a tensor that ought to be exactly zero."""
    worst = 0.0
    witness = None
    for idx in t.nonzero_indices():
        f = t.get(idx)
        size = float(f.backend.max_abs_coeff()) if f.is_polynomial else 1.0
        if size > worst:
            worst = size
            witness = {"index": list(idx), "entry": emit_scalar(f)}
    return worst, witness


class _Accumulator:
    """Tracks the worst residual of one named identity across trials."""

    def __init__(self, name: str):
        self.name = name
        self.worst = 0.0
        self.witness: Optional[dict] = None
        self.runs = 0

    def feed(self, t: Tensor, trial: int):
        self.runs += 1
        worst, witness = _tensor_residual(t)
        if worst > self.worst:
            self.worst = worst
            self.witness = dict(witness or {}, trial=trial)

    def result(self) -> CheckResult:
        return CheckResult(
            self.name,
            self.worst == 0.0,
            self.worst,
            self.witness if self.worst else None,
            detail=f"{self.runs} trials, exact arithmetic",
        )


def run_check_complex(args) -> int:
    if args.dim < 1:
        raise BadParameter("--dim must be at least 1")
    if args.grade < 0:
        raise BadParameter("--grade must be non-negative")
    if args.trials < 1:
        raise BadParameter("--trials must be at least 1")
    seed = _seed(args)
    rng = random.Random(seed)
    report = VerificationReport(
        "cochain complex identity suite",
        context={
            "dim": args.dim,
            "grade": args.grade,
            "trials": args.trials,
            "seed": seed,
            "kernel": backend_name(),
        },
    )
    dd = _Accumulator("differential_squares_to_zero")
    iso_k = _Accumulator("psi_after_phi_is_identity")
    iso_g = _Accumulator("phi_after_psi_is_identity")
    recon = _Accumulator("grade_reconstruction_identity")
    explicit = _Accumulator("explicit_grade1_differential_matches")
    for trial in range(args.trials):
        e = random_K_element(args.dim, args.grade, rng)
        dd.feed(d_K(d_K(e)).tensor, trial)
        s = phi(e)
        iso_k.feed(psi(s).tensor - e.tensor, trial)
        iso_g.feed(phi(psi(s)).tensor - s.tensor, trial)
        if args.grade >= 2:
            recon.feed(skew_reconstruction_residual(s), trial)
        if args.grade == 1:
            explicit.feed(d_G(s).tensor - d_G1_explicit(s).tensor, trial)
    report.add(dd.result())
    report.add(iso_k.result())
    report.add(iso_g.result())
    if args.grade >= 2:
        report.add(recon.result())
    if args.grade == 1:
        report.add(explicit.result())
    return _print_report(report, args)


def run_poincare(args) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {args.input}: {exc}")
    parsed = parse_tensor(text)
    if parsed.space is None or parsed.space.kind != "K":
        raise SchemaError("potential solving needs a document with space K")
    element = parsed.as_element()
    result = solve_potential(element)
    doc = dump_tensor(result.potential)
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc)
    except OSError as exc:
        raise SchemaError(f"cannot write {args.output}: {exc}")
    report = VerificationReport(
        "potential construction",
        context={
            "input": args.input,
            "output": args.output,
            "grade": element.grade,
            "dim": element.dim,
        },
    )
    report.add(
        CheckResult(
            "differential_of_potential_recovers_input",
            result.residual == 0.0,
            result.residual,
            detail="exact arithmetic",
        )
    )
    return _print_report(report, args)


def run_kernel(args) -> int:
    if args.dim < 1:
        raise BadParameter("--dim must be at least 1")
    basis = affine_kernel_basis(args.dim)
    report = VerificationReport(
        "kernel of the grade-0 differential",
        context={
            "dim": args.dim,
            "basis": [emit_scalar(b) for b in basis],
        },
    )
    report.add(
        CheckResult(
            "basis_has_dim_plus_one_elements",
            len(basis) == args.dim + 1,
            0.0 if len(basis) == args.dim + 1 else 1.0,
            detail=f"{len(basis)} elements",
        )
    )
    worst = 0.0
    witness = None
    for i, b in enumerate(basis):
        e = CochainElement.wrap_trusted(K_space(args.dim, 0), Tensor.scalar(b))
        res, wit = _tensor_residual(d_K(e).tensor)
        if res > worst:
            worst, witness = res, dict(wit or {}, basis_element=i)
    report.add(
        CheckResult("hessian_annihilates_basis", worst == 0.0, worst, witness)
    )
    return _print_report(report, args)


def _metric_from_args(args):
    if getattr(args, "metric_file", None):
        try:
            with open(args.metric_file, "r", encoding="utf-8") as fh:
                return parse_metric(fh.read())
        except OSError as exc:
            raise SchemaError(f"cannot read {args.metric_file}: {exc}")
    name = args.metric
    kwargs = {}
    try:
        kwargs["mass"] = Fraction(args.mass)
        kwargs["omega"] = Fraction(args.omega)
    except (ValueError, ZeroDivisionError):
        raise BadParameter("mass and omega must be rationals like 1 or 3/2")
    if args.H is not None:
        field = parse_field(args.H, DIM)
        kwargs["H"] = field
    if name == "mp" or name == "flat":
        pass
    elif "H" in kwargs:
        raise BadParameter(f"--H is only meaningful for mp or flat, not {name}")
    if name not in ("extreme_rn",):
        kwargs.pop("mass", None)
    if name not in ("schwarzschild",):
        kwargs.pop("omega", None)
    return builtin_metric(name, **kwargs)


def _spacetime_policy(args) -> EqualityPolicy:
    if args.samples < 1:
        raise BadParameter("--samples must be at least 1")
    if args.tol < 0:
        raise BadParameter("--tol must be non-negative")
    return EqualityPolicy(
        points=args.samples, bound=9, tolerance=args.tol, seed=_seed(args)
    )


def run_spacetime_verify(args) -> int:
    metric = _metric_from_args(args)
    report = verify_potential(metric, _spacetime_policy(args))
    return _print_report(report, args)


def run_spacetime_table(args) -> int:
    metric = _metric_from_args(args)
    report = table_report(metric, _spacetime_policy(args))
    return _print_report(report, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cochain",
        description=(
            "Exact checks for the two flat-space cochain complexes and the "
            "gravitational potential of isotropic metrics."
        ),
    )
    sub = parser.add_subparsers(dest="command")

    def add_common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=0, help="RNG seed")
        p.add_argument(
            "--json", action="store_true", help="emit the report as JSON"
        )

    p = sub.add_parser(
        "check-complex", help="randomized identity suite for one graded piece"
    )
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--grade", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    add_common(p)
    p.set_defaults(handler=run_check_complex)

    p = sub.add_parser("poincare", help="solve a potential for a closed element")
    p.add_argument("--in", dest="input", required=True, metavar="TENSOR_JSON")
    p.add_argument("--out", dest="output", required=True, metavar="OUT_JSON")
    add_common(p, seed=False)
    p.set_defaults(handler=run_poincare)

    p = sub.add_parser("kernel", help="affine kernel of the grade-0 differential")
    p.add_argument("--dim", type=int, required=True)
    add_common(p, seed=False)
    p.set_defaults(handler=run_kernel)

    p = sub.add_parser("spacetime", help="isotropic-metric checks")
    st = p.add_subparsers(dest="spacetime_command")
    for name, handler, blurb in (
        ("verify", run_spacetime_verify, "check F = d_G A at sample points"),
        ("table", run_spacetime_table, "compare against the closed-form tables"),
    ):
        q = st.add_parser(name, help=blurb)
        q.add_argument("--metric", default="mp", choices=BUILTIN_NAMES)
        q.add_argument(
            "--metric-file", default=None, help="metric JSON document (overrides --metric)"
        )
        q.add_argument("--H", default=None, help="s-expression for H (mp/flat only)")
        q.add_argument("--mass", default="1")
        q.add_argument("--omega", default="4")
        q.add_argument("--samples", type=int, default=100)
        q.add_argument("--tol", type=float, default=1e-9)
        add_common(q)
        q.set_defaults(handler=handler)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_help()
        return 2
    try:
        return handler(args)
    except (NotClosed, InvalidMember, NotConnectionShaped) as exc:
        sys.stderr.write(f"identity violation: {exc}{_violation_witness(exc)}\n")
        return 1
    except SchemaError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except (BadParameter, SingularMetric, SingularPoint) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except CochainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def _violation_witness(exc) -> str:
    if isinstance(exc, InvalidMember) and getattr(exc, "report", None) is not None:
        worst = exc.report.worst()
        if worst is not None:
            return (
                f" | witness: condition {worst.name}, "
                f"residual {worst.max_residual:g}, detail {worst.witness}"
            )
    if isinstance(exc, NotClosed) and getattr(exc, "residual", None) is not None:
        indices = exc.residual.nonzero_indices()
        if indices:
            return f" | witness: nonzero residual at index {list(indices[0])}"
    return ""


if __name__ == "__main__":
    sys.exit(main())
