"""Model operators and the capability interface consumed everywhere else.

Kinds: multiplication by a sequence law on l2(N), the right shift, the
compact weighted right shifts on l2(N) and l2(Z), the integration
operator (Vf)(x) = integral_0^x f on L2[0,1], and multiplication by x
on L2[a,b].  Each instance is immutable and advertises the capabilities
its kind supports: apply, adjoint, exact SVD, known operator norm,
self-adjointness/positivity flags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import CapabilityError, SpaceMismatchError
from .elements import (
    Func,
    Seq,
    integrate_leg01,
    mult_x_leg,
    osc_antiderivative,
)

_LAW_CHECK_WINDOW = 10_000


@dataclass(frozen=True)
class SequenceLaw:
    """Closed-form sequence n -> value, usable at arbitrary index."""

    name: str
    fn: Callable

    def __call__(self, n):
        return self.fn(np.asarray(n))


def power_law(c: float, p: float) -> SequenceLaw:
    """c * n^(-p)."""
    return SequenceLaw(f"pow:{c:g},{p:g}", lambda n: c * np.asarray(n, dtype=float) ** (-p))


def geometric_law(c: float, q: float) -> SequenceLaw:
    """c * q^n."""
    return SequenceLaw(f"geom:{c:g},{q:g}", lambda n: c * q ** np.asarray(n, dtype=float))


def constant_law(c: float) -> SequenceLaw:
    return SequenceLaw(f"const:{c:g}", lambda n: c * np.ones_like(np.asarray(n, dtype=float)))


def shifted_power_law(c: float, p: float) -> SequenceLaw:
    """c * (n+1)^(-p); finite at n = 0, for Z-indexed weights."""
    return SequenceLaw(
        f"pow1:{c:g},{p:g}", lambda n: c * (np.asarray(n, dtype=float) + 1.0) ** (-p)
    )


def parse_law(text: str) -> SequenceLaw:
    """Parse a law string: pow:c,p | pow1:c,p | geom:c,q | const:c."""
    head, _, rest = text.partition(":")
    try:
        if head == "pow":
            c, p = (float(v) for v in rest.split(","))
            return power_law(c, p)
        if head == "pow1":
            c, p = (float(v) for v in rest.split(","))
            return shifted_power_law(c, p)
        if head == "geom":
            c, q = (float(v) for v in rest.split(","))
            return geometric_law(c, q)
        if head == "const":
            return constant_law(float(rest))
    except ValueError as exc:
        raise ValueError(f"malformed law {text!r}") from exc
    raise ValueError(f"unknown law kind {text!r}")


@dataclass(frozen=True)
class SvdTriple:
    """Singular value decomposition A = sum_n sigma(n) |left(n)><right(n)|.

    All callables are 1-indexed; sigma is strictly decreasing and positive,
    the families orthonormal.
    """

    sigma: Callable[[int], float]
    right: Callable[[int], object]  # phi_n, the trial-side family
    left: Callable[[int], object]   # psi_n, the test-side family
    right_complete: bool = True
    left_complete: bool = True


class BoundedOperator:
    """Base class: immutable operator with declared capabilities."""

    kind = "abstract"

    def __init__(self, label, space, op_norm=None, self_adjoint=False,
                 positive=False, compact=False):
        self.label = label
        self.space = space  # ("seq", domain) or ("func", interval)
        self.op_norm = op_norm
        self.self_adjoint = self_adjoint
        self.positive = positive
        self.compact = compact

    def _check_space(self, f):
        if self.space[0] == "seq":
            if not isinstance(f, Seq) or f.domain != self.space[1]:
                raise SpaceMismatchError(
                    f"{self.label} acts on sequences over {self.space[1]!r}"
                )
        else:
            if not isinstance(f, Func) or f.interval != self.space[1]:
                raise SpaceMismatchError(
                    f"{self.label} acts on functions on {self.space[1]}"
                )

    def apply(self, f):
        raise NotImplementedError

    def adjoint_apply(self, f):
        raise CapabilityError(f"{self.label} has no adjoint capability")

    def exact_svd(self) -> SvdTriple:
        raise CapabilityError(f"{self.label} has no exact SVD")


def _validate_weight_law(law: SequenceLaw, start: int):
    n = np.arange(start, start + _LAW_CHECK_WINDOW)
    with np.errstate(divide="ignore"):
        vals = np.asarray(law(n), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"weight law {law.name} is not finite from index {start}")
    if not np.all(vals >= 0) or vals[0] <= 0:
        raise ValueError(f"weight law {law.name} must be positive")
    # fast laws may underflow to exact zero inside the window; check the
    # positive prefix and require the tail to stay at zero
    positive = vals > 0
    cut = len(vals) if positive.all() else int(np.argmin(positive))
    if np.any(vals[cut:] != 0):
        raise ValueError(f"weight law {law.name} must be positive")
    if not np.all(np.diff(vals[:cut]) < 0):
        raise ValueError(f"weight law {law.name} must be strictly decreasing")


class MultiplicationSeq(BoundedOperator):
    """Multiplication by a bounded sequence law on l2(N)."""

    kind = "multiplication_seq"

    def __init__(self, law: SequenceLaw):
        probe = np.asarray(law(np.arange(1, _LAW_CHECK_WINDOW + 1)))
        is_real = bool(np.all(np.isreal(probe)))
        peak = float(np.max(np.abs(probe)))
        super().__init__(
            label=f"mult-seq({law.name})",
            space=("seq", "nat"),
            # supremum over the probe window; exact for the monotone presets
            op_norm=peak,
            self_adjoint=is_real,
            positive=is_real and bool(np.all(probe.real >= 0)),
            # heuristic: the law has visibly decayed on the window
            compact=bool(abs(probe[-1]) < 0.01 * peak),
        )
        self.law = law

    def apply(self, f: Seq) -> Seq:
        self._check_space(f)
        return f.mapped(self.law)

    def adjoint_apply(self, f: Seq) -> Seq:
        self._check_space(f)
        return f.mapped(lambda n: np.conj(self.law(n)))


class RightShift(BoundedOperator):
    """The isometry e_n -> e_{n+1} on l2(N); adjoint is the left shift."""

    kind = "right_shift"

    def __init__(self):
        super().__init__(label="right-shift", space=("seq", "nat"), op_norm=1.0)

    def apply(self, f: Seq) -> Seq:
        self._check_space(f)
        return f.shifted(+1)

    def adjoint_apply(self, f: Seq) -> Seq:
        self._check_space(f)
        return f.shifted(-1)


class WeightedRightShift(BoundedOperator):
    """Compact weighted right shift e_n -> sigma_n e_{n+1} on l2(N)."""

    kind = "weighted_right_shift"

    def __init__(self, law: SequenceLaw):
        _validate_weight_law(law, start=1)
        super().__init__(
            label=f"weighted-right-shift({law.name})",
            space=("seq", "nat"),
            op_norm=float(law(np.array(1))),
            compact=True,
        )
        self.law = law

    def apply(self, f: Seq) -> Seq:
        self._check_space(f)
        return f.mapped(self.law).shifted(+1)

    def adjoint_apply(self, f: Seq) -> Seq:
        # adjoint maps e_{n+1} -> sigma_n e_n
        self._check_space(f)
        return f.shifted(-1).mapped(self.law)

    def exact_svd(self) -> SvdTriple:
        return SvdTriple(
            sigma=lambda n: float(self.law(np.array(n))),
            right=lambda n: Seq.basis_vector(n),
            left=lambda n: Seq.basis_vector(n + 1),
            right_complete=True,
            left_complete=False,
        )


class WeightedRightShiftZ(BoundedOperator):
    """Compact weighted right shift e_n -> sigma_|n| e_{n+1} on l2(Z).

    The weight law is indexed from 0.  Singular values occur in pairs
    (sigma_|n| for n and -n), so no strictly-decreasing SVD enumeration
    exists and the exact-SVD capability is absent.
    """

    kind = "weighted_right_shift_Z"

    def __init__(self, law: SequenceLaw):
        _validate_weight_law(law, start=0)
        super().__init__(
            label=f"weighted-right-shift-Z({law.name})",
            space=("seq", "int"),
            op_norm=float(law(np.array(0))),
            compact=True,
        )
        self.law = law

    def _abs_law(self, n):
        return self.law(np.abs(np.asarray(n)))

    def apply(self, f: Seq) -> Seq:
        self._check_space(f)
        return f.mapped(self._abs_law).shifted(+1)

    def adjoint_apply(self, f: Seq) -> Seq:
        self._check_space(f)
        return f.shifted(-1).mapped(self._abs_law)


class Volterra(BoundedOperator):
    """Integration from 0 on L2[0,1]: (Vf)(x) = integral_0^x f."""

    kind = "volterra"

    def __init__(self):
        super().__init__(
            label="volterra",
            space=("func", (0.0, 1.0)),
            op_norm=2.0 / math.pi,
            compact=True,
        )

    def apply(self, f: Func) -> Func:
        self._check_space(f)
        leg = integrate_leg01(f.leg)
        osc: dict = {}
        const = 0.0 + 0.0j
        for (m, w), c in f.osc.items():
            coeffs = osc_antiderivative(m, w)
            for j, cj in enumerate(coeffs):
                key = (j, w)
                osc[key] = osc.get(key, 0.0) + c * cj
            const -= c * coeffs[0]
        if const != 0:
            if len(leg) == 0:
                leg = np.zeros(1, dtype=complex)
            leg = leg.copy()
            leg[0] += const  # the constant function is the degree-0 element
        out = Func(f.interval, leg, osc)
        out.approximate = f.approximate
        return out

    def adjoint_apply(self, f: Func) -> Func:
        # V* f = <1, f> 1 - V f
        self._check_space(f)
        total = Func.from_leg(f.interval, [1.0]).inner(f)
        out = Func.from_leg(f.interval, [total]) - self.apply(f)
        out.approximate = f.approximate
        return out

    def exact_svd(self) -> SvdTriple:
        def sigma(n):
            return 2.0 / ((2 * n - 1) * math.pi)

        def right(n):  # sqrt(2) cos((2n-1) pi x / 2)
            w = (2 * n - 1) * math.pi / 2.0
            s = 1.0 / math.sqrt(2.0)
            return Func.from_osc((0.0, 1.0), {(0, w): s, (0, -w): s})

        def left(n):  # sqrt(2) sin((2n-1) pi x / 2)
            w = (2 * n - 1) * math.pi / 2.0
            s = 1.0 / math.sqrt(2.0)
            return Func.from_osc((0.0, 1.0), {(0, w): -1j * s, (0, -w): 1j * s})

        return SvdTriple(sigma=sigma, right=right, left=left)


class MultiplicationX(BoundedOperator):
    """Multiplication by the coordinate on L2[a,b]; self-adjoint."""

    kind = "multiplication_x"

    def __init__(self, interval):
        a, b = (float(interval[0]), float(interval[1]))
        if not a < b:
            raise ValueError(f"degenerate interval [{a}, {b}]")
        super().__init__(
            label=f"mult-x[{a:g},{b:g}]",
            space=("func", (a, b)),
            op_norm=max(abs(a), abs(b)),
            self_adjoint=True,
            positive=a >= 0,
        )

    def apply(self, f: Func) -> Func:
        self._check_space(f)
        leg = mult_x_leg(f.interval, f.leg)
        osc = {(m + 1, w): c for (m, w), c in f.osc.items()}
        out = Func(f.interval, leg, osc)
        out.approximate = f.approximate
        return out

    adjoint_apply = apply


@dataclass(frozen=True)
class OperatorSpec:
    """Constructor data for make_operator (CLI-friendly)."""

    kind: str
    interval: tuple | None = None
    law: SequenceLaw | None = None


def make_operator(spec: OperatorSpec) -> BoundedOperator:
    """Build the operator described by `spec`, validating its parameters."""
    kind = spec.kind
    if kind == "volterra":
        return Volterra()
    if kind == "multiplication_x":
        if spec.interval is None:
            raise ValueError("multiplication_x requires an interval")
        return MultiplicationX(spec.interval)
    if kind == "right_shift":
        return RightShift()
    if kind == "weighted_right_shift":
        if spec.law is None:
            raise ValueError("weighted_right_shift requires a weight law")
        return WeightedRightShift(spec.law)
    if kind == "weighted_right_shift_Z":
        if spec.law is None:
            raise ValueError("weighted_right_shift_Z requires a weight law")
        return WeightedRightShiftZ(spec.law)
    if kind == "multiplication_seq":
        if spec.law is None:
            raise ValueError("multiplication_seq requires a multiplier law")
        return MultiplicationSeq(spec.law)
    raise ValueError(f"unknown operator kind {kind!r}")


def parse_operator(text: str) -> BoundedOperator:
    """Parse CLI operator strings.

    Grammar: volterra | mult-x:a,b | right-shift |
    weighted-right-shift:LAW | weighted-right-shift-z:LAW | mult-seq:LAW
    where LAW is pow:c,p | geom:c,q | const:c.
    """
    head, _, rest = text.partition(":")
    if head == "volterra":
        return make_operator(OperatorSpec("volterra"))
    if head == "mult-x":
        a, b = (float(v) for v in rest.split(","))
        return make_operator(OperatorSpec("multiplication_x", interval=(a, b)))
    if head == "right-shift":
        return make_operator(OperatorSpec("right_shift"))
    if head == "weighted-right-shift":
        return make_operator(OperatorSpec("weighted_right_shift", law=parse_law(rest)))
    if head == "weighted-right-shift-z":
        return make_operator(OperatorSpec("weighted_right_shift_Z", law=parse_law(rest)))
    if head == "mult-seq":
        return make_operator(OperatorSpec("multiplication_seq", law=parse_law(rest)))
    raise ValueError(f"unknown operator spec {text!r}")


def apply(op: BoundedOperator, f):
    """Apply the operator; exact closed forms on catalogued elements."""
    return op.apply(f)


def exact_svd(op: BoundedOperator) -> SvdTriple:
    """Exact singular decomposition, when the operator kind has one."""
    return op.exact_svd()


def volterra_power_apply(n: int, f: Func) -> Func:
    """n-th power of the integration operator via its explicit kernel.

    Expands the kernel (x-y)^{n-1}/(n-1)! binomially, so each term is a
    monomial multiplication, one integration, and another monomial
    multiplication; this path is independent of iterating apply().
    """
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    op = Volterra()
    op._check_space(f)
    mult = MultiplicationX((0.0, 1.0))
    acc = Func.zero(f.interval)
    # y^k f, integrated, then times x^{n-1-k}
    yk = f
    for k in range(0, n):
        term = op.apply(yk)
        for _ in range(n - 1 - k):
            term = mult.apply(term)
        coeff = ((-1.0) ** k) * math.comb(n - 1, k) / math.factorial(n - 1)
        acc = acc + coeff * term
        if k < n - 1:
            yk = mult.apply(yk)
    return acc
