"""Numeric demonstrator of the normalization flow in dimension n = 2.

The family ``x0 = f_t = (1 − t + tα)·h_2²`` with ``α = 1 + β·x2²`` joins
Γ_2 (t = 0) to the perturbed graph ``x0 = α·h_2²`` (t = 1).  The field
``H·(x0∂0 + ½x1∂1)`` carries the moving graph along when

    H = ∂_t f / (f − ½ x1 ∂_{x1} f),

and both numerator and denominator are divisible by the telescoping sum
``E_2 = h_2² − x1·h_2``, leaving ``H = N/U`` with ``U`` a unit near 0.
"""

from __future__ import annotations

import decimal
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .fronts import h_poly
from .poly import NotDivisible, Polynomial, to_rational, var
from .verify import scaling_field, telescoping_sum

__all__ = ["FlowError", "FlowField", "FlowReport", "normalization_field", "run_normalization_flow"]

_VARS = ("t", "x1", "x2")


class FlowError(ValueError):
    """Raised for a non-positive denominator on the box or a divergent integration."""


@dataclass(frozen=True)
class FlowField:
    beta: Fraction
    family: Polynomial  # f_t
    target: Polynomial  # α·h_2²
    numerator: Polynomial  # N
    denominator: Polynomial  # U

    def divisible_by(self, p: Polynomial) -> Polynomial | NotDivisible:
        return self.numerator.divide_exact(p)


def normalization_field(beta) -> FlowField:
    beta = Fraction(to_rational(beta))
    t, x2 = var("t"), var("x2")
    h2 = h_poly(2)
    alpha = 1 + (x2**2).scale(beta)
    family = (1 - t + t * alpha) * h2**2
    fx = var("x0") - family
    # v_1 applied to x0 − f_t, restricted to the graph x0 = f_t
    denom_raw = scaling_field(1).apply(fx).substitute({"x0": family})
    e2 = telescoping_sum(2)
    num = family.partial("t").divide_exact(e2)
    den = denom_raw.divide_exact(e2)
    if isinstance(num, NotDivisible) or isinstance(den, NotDivisible):
        raise FlowError("the division formula does not apply: E_2 does not divide the transport data")
    return FlowField(beta, family, alpha * h2**2, num, den)


@dataclass
class FlowReport:
    beta: str
    steps: int
    box: str
    denominator_lower_bound: str
    graph_deviation: float
    zero_section_deviation: float
    gamma1_deviation: float
    order_errors: tuple[float, float]
    order_ratio: float
    field_numerator: str
    field_denominator: str
    divisible_by_h20: bool
    divisible_by_h21: bool
    h21_remainder: str | None
    details: dict = field(default_factory=dict)

    def passed(self, graph_tol: float = 1e-6, ratio_min: float = 12.0, zero_tol: float = 1e-9) -> bool:
        return (
            self.graph_deviation <= graph_tol
            and self.zero_section_deviation <= zero_tol
            and (self.order_ratio >= ratio_min or max(self.order_errors) == 0.0)
        )

    def to_dict(self) -> dict:
        return asdict(self)


def _samples(box: Fraction, res: int) -> tuple[np.ndarray, np.ndarray]:
    ticks = np.linspace(-float(box), float(box), res)
    a, b = np.meshgrid(ticks, ticks, indexing="ij")
    return a.ravel(), b.ravel()


def _rk4(rhs, state: list, steps: int, one):
    """Fixed-step RK4 for t in [0, 1]; works for float arrays and Decimal lists alike."""
    dt = one / steps
    half = dt / 2
    for k in range(steps):
        t = dt * k
        k1 = rhs(t, state)
        k2 = rhs(t + half, [s + half * d for s, d in zip(state, k1)])
        k3 = rhs(t + half, [s + half * d for s, d in zip(state, k2)])
        k4 = rhs(t + dt, [s + dt * d for s, d in zip(state, k3)])
        state = [s + dt / 6 * (a + 2 * b + 2 * c + d) for s, a, b, c, d in zip(state, k1, k2, k3, k4)]
    return state


def _float_rhs(ff: FlowField):
    n_f = ff.numerator.lambdify(_VARS)
    u_f = ff.denominator.lambdify(_VARS)

    def rhs(t, state):
        x0, x1, x2 = state
        tt = np.full_like(x1, t)
        h = n_f(tt, x1, x2) / u_f(tt, x1, x2)
        return [h * x0, 0.5 * h * x1, np.zeros_like(x2)]

    return rhs


def _decimal_poly(p: Polynomial):
    terms = [(decimal.Decimal(Fraction(c).numerator) / decimal.Decimal(Fraction(c).denominator), m) for m, c in p.terms()]

    def ev(point: dict):
        total = decimal.Decimal(0)
        for c, mono in terms:
            term = c
            for v, e in mono.items():
                term *= point[v] ** e
            total += term
        return total

    return ev


def _decimal_error(ff: FlowField, box: Fraction, res: int, steps: int, prec: int) -> float:
    """Max graph deviation of a multiprecision RK4 run, free of float roundoff."""
    with decimal.localcontext() as ctx:
        ctx.prec = prec
        D = decimal.Decimal
        n_ev, u_ev = _decimal_poly(ff.numerator), _decimal_poly(ff.denominator)
        target = _decimal_poly(ff.target)
        lo = Fraction(-box)
        ticks = [lo + 2 * Fraction(box) * Fraction(k, res - 1) for k in range(res)]
        worst = D(0)
        for a in ticks:
            for b in ticks:
                x1 = D(a.numerator) / D(a.denominator)
                x2 = D(b.numerator) / D(b.denominator)
                x0 = (x1 - x2 * x2) ** 2

                def rhs(t, state, x2=x2):
                    s0, s1 = state
                    pt = {"t": t, "x1": s1, "x2": x2}
                    h = n_ev(pt) / u_ev(pt)
                    return [h * s0, h * s1 / 2]

                s0, s1 = _rk4(rhs, [x0, x1], steps, D(1))
                dev = abs(s0 - target({"x1": s1, "x2": x2}))
                worst = max(worst, dev)
        return float(worst)


def run_normalization_flow(
    beta=Fraction(1, 10),
    steps: int = 1000,
    box=Fraction(1, 5),
    res: int = 21,
    order_res: int = 5,
    precision: int = 50,
) -> FlowReport:
    """Integrate the n = 2 normalization flow and measure how well it hits the target graph.

    ``order_errors`` come from a multiprecision run with ``steps`` and
    ``2·steps`` steps; at these step counts the RK4 truncation error lies far
    below double-precision roundoff, so the float run alone cannot show it.
    """
    if steps < 4:
        raise FlowError(f"step count {steps} is too small for a stable run")
    box = Fraction(to_rational(box))
    if box <= 0:
        raise FlowError("box half-width must be positive")
    ff = normalization_field(beta)
    lo, _hi = ff.denominator.interval_bounds({"t": (0, 1), "x1": (-box, box), "x2": (-box, box)})
    if lo <= 0:
        raise FlowError(f"denominator {ff.denominator} is not positive on the box (lower bound {lo})")

    rhs = _float_rhs(ff)
    x1, x2 = _samples(box, res)
    hh = x1 - x2**2
    runs = {
        "gamma2": [hh**2, x1, x2],
        "gamma0": [np.zeros_like(x1), x1, x2],
        "gamma1": [x1**2, x1, x2],
    }
    out = {}
    for name, state in runs.items():
        with np.errstate(over="ignore", invalid="ignore"):
            end = _rk4(rhs, [s.copy() for s in state], steps, 1.0)
        if not all(np.all(np.isfinite(s)) for s in end) or max(float(np.max(np.abs(s))) for s in end) > 1e6:
            raise FlowError(f"integration diverged with {steps} steps")
        out[name] = end
    y0, y1, y2 = out["gamma2"]
    target_f = ff.target.lambdify(("x1", "x2"))
    graph_dev = float(np.max(np.abs(y0 - target_f(y1, y2))))
    zero_dev = float(np.max(np.abs(out["gamma0"][0])))
    g1 = out["gamma1"]
    gamma1_dev = float(np.max(np.abs(g1[0] - g1[1] ** 2)))

    e_coarse = _decimal_error(ff, box, order_res, steps, precision)
    e_fine = _decimal_error(ff, box, order_res, 2 * steps, precision)
    ratio = e_coarse / e_fine if e_fine > 0 else float("inf")

    h20, h21 = h_poly(2, 0), h_poly(2, 1)
    q0, q1 = ff.divisible_by(h20), ff.divisible_by(h21)
    return FlowReport(
        beta=str(ff.beta),
        steps=steps,
        box=f"[-{box},{box}]^2",
        denominator_lower_bound=str(lo),
        graph_deviation=graph_dev,
        zero_section_deviation=zero_dev,
        gamma1_deviation=gamma1_dev,
        order_errors=(e_coarse, e_fine),
        order_ratio=ratio,
        field_numerator=str(ff.numerator),
        field_denominator=str(ff.denominator),
        divisible_by_h20=not isinstance(q0, NotDivisible),
        divisible_by_h21=not isinstance(q1, NotDivisible),
        h21_remainder=str(q1.remainder) if isinstance(q1, NotDivisible) else None,
        details={"samples": int(x1.size), "order_samples": order_res**2, "precision": precision},
    )
