"""Weight specifications and stability certification.

A weight is determined by a polynomial h(z, y) = sum_i h_i(y) z^i that is
stable (zero free on |z| <= 1) for every y in [-1, 1].  Two views exist:

* generic: the list of coefficient polynomials h_i(y) is given directly;
* product: h is a product of quadratic factors (1 + 2 a_i y z + a_i^2 z^2)
  coming from the bidisk-stable factorization prod_i (1 + a_i z w); the
  raw parameters a_i are stored and the generic expansion is cached.

The reflected weight h~(x, w) swaps the roles of (z, y) and (w, x); for
product specs it has the same factor parameters.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .poly_core import CHEB_U, MONOMIAL, UnivariatePoly

GENERIC_H = "generic_h"
PRODUCT_OMEGA = "product_omega"


class InvalidWeightError(ValueError):
    """The weight specification violates a structural invariant."""


class UnsupportedWeightError(ValueError):
    """The requested view needs product structure the spec does not have."""


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    min_modulus: float
    witness_y: float | None
    method: str  # "analytic" or "sampled"
    degree_drops: tuple[float, ...]
    tol: float


def _degree_bound(n_h: int, i: int) -> float:
    return n_h / 2 - abs(n_h / 2 - i)


class WeightSpec:
    """Weight specification; immutable after construction.

    ``factors`` is None for generic specs.  ``h`` is the list of
    UnivariatePoly coefficients of z^0 .. z^{N_h} (monomial basis in y).
    """

    def __init__(self, h: list[UnivariatePoly] | None = None, factors: tuple[float, ...] | None = None):
        if h is None and factors is None:
            raise InvalidWeightError("either h coefficients or product factors required")
        if factors is not None:
            factors = tuple(float(a) for a in factors)
            for a in factors:
                if not (0.0 < abs(a) < 1.0):
                    raise InvalidWeightError(f"invalid factor {a}: need 0 < |a| < 1")
        self._factors = factors
        self._h = tuple(h) if h is not None else None
        if self._h is not None:
            self._validate_h(self._h)

    # -- validation -------------------------------------------------------
    @staticmethod
    def _validate_h(h: tuple[UnivariatePoly, ...]):
        if not h:
            raise InvalidWeightError("empty h list")
        n_h = len(h) - 1
        h0 = h[0].to_basis(MONOMIAL)
        if h0.deg != 0 or abs(float(h0.coeffs[0]) - 1.0) > 1e-12:
            raise InvalidWeightError("h_0 must be identically 1")
        for i, hi in enumerate(h):
            if not hi.is_zero and hi.deg > _degree_bound(n_h, i):
                raise InvalidWeightError(
                    f"deg h_{i} = {hi.deg} exceeds the bound {_degree_bound(n_h, i)}"
                )

    # -- views ------------------------------------------------------------
    @property
    def variant(self) -> str:
        return PRODUCT_OMEGA if self._factors is not None else GENERIC_H

    @property
    def factors(self) -> tuple[float, ...]:
        if self._factors is None:
            raise UnsupportedWeightError("no product factorization available")
        return self._factors

    @property
    def n_f(self) -> int:
        return len(self.factors)

    @cached_property
    def h(self) -> tuple[UnivariatePoly, ...]:
        if self._h is not None:
            return self._h
        return _expand_factors(self._factors)

    @property
    def n_h(self) -> int:
        return len(self.h) - 1

    @cached_property
    def kappa(self) -> int:
        degs = [hi.deg for hi in self.h if not hi.is_zero]
        return int(max((d for d in degs), default=0))

    @cached_property
    def fingerprint(self) -> str:
        if self._factors is not None:
            payload = b"product:" + np.asarray(sorted(self._factors), dtype=float).tobytes()
        else:
            rows = [np.asarray(hi.to_basis(MONOMIAL).coeffs, dtype=float).tobytes() for hi in self.h]
            payload = b"generic:" + b"|".join(rows)
        return hashlib.sha1(payload).hexdigest()

    # -- evaluation -------------------------------------------------------
    def h_eval(self, z, y):
        """h(z, y) with complex z and real y (broadcasting elementwise)."""
        z = np.asarray(z, dtype=complex)
        y = np.asarray(y, dtype=float)
        acc = np.zeros(np.broadcast(z, y).shape, dtype=complex)
        zp = np.ones_like(z)
        for hi in self.h:
            acc = acc + hi(y) * zp
            zp = zp * z
        return acc

    def h_abs2(self, theta, y):
        """|h(e^{i theta}, y)|^2 on broadcastable grids."""
        z = np.exp(1j * np.asarray(theta, dtype=float))
        v = self.h_eval(z, y)
        return (v * v.conj()).real

    # -- misc -------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, WeightSpec) and self.fingerprint == other.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    def __repr__(self):
        if self._factors is not None:
            return f"WeightSpec(product {list(self._factors)})"
        return f"WeightSpec(generic N_h={self.n_h})"


def _expand_factors(factors: tuple[float, ...]) -> tuple[UnivariatePoly, ...]:
    """h(z, y) = prod_i (1 + 2 a_i y z + a_i^2 z^2) as z-coefficient rows.

    Rows are y-monomial coefficient vectors, convolved factor by factor.
    """
    rows = [np.array([1.0])]  # h = 1
    for a in factors:
        fac = [np.array([1.0]), np.array([0.0, 2.0 * a]), np.array([a * a])]
        new = [np.zeros(1) for _ in range(len(rows) + 2)]
        for i, r in enumerate(rows):
            for j, f in enumerate(fac):
                conv = np.convolve(r, f)
                tgt = new[i + j]
                if len(tgt) < len(conv):
                    tgt = np.concatenate([tgt, np.zeros(len(conv) - len(tgt))])
                tgt[: len(conv)] += conv
                new[i + j] = tgt
        rows = new
    return tuple(UnivariatePoly(MONOMIAL, r) for r in rows)


def product_spec(a: list[float]) -> WeightSpec:
    """Product-form weight from factor parameters (0 < |a_i| < 1)."""
    return WeightSpec(factors=tuple(a))


def expand_product(a: list[float]) -> WeightSpec:
    """Same as :func:`product_spec`; the generic h_i(y) view is exposed
    through ``spec.h`` (computed eagerly here to validate invariants)."""
    spec = product_spec(a)
    WeightSpec._validate_h(spec.h)
    return spec


def generic_spec(h_rows: list[list[float]] | list[UnivariatePoly]) -> WeightSpec:
    """Generic weight from y-monomial coefficient rows [h_0, h_1, ...]."""
    h = [
        r if isinstance(r, UnivariatePoly) else UnivariatePoly(MONOMIAL, np.asarray(r, dtype=float))
        for r in h_rows
    ]
    return WeightSpec(h=h)


def tilde_expand(spec: WeightSpec) -> WeightSpec:
    """The reflected weight h~(x, w) = omega(z, w) omega(1/z, w).

    For product specs the reflected weight is again a product spec with
    the same factor parameters (each factor reads 1 + 2 a_i x w + a_i^2 w^2
    in the swapped variables), so the same WeightSpec value represents it;
    callers interpret its variables as (w, x).
    """
    if spec.variant != PRODUCT_OMEGA:
        raise UnsupportedWeightError("tilde expansion requires product structure")
    return WeightSpec(factors=spec.factors)


def omega_laurent(spec: WeightSpec) -> dict[tuple[int, int], float]:
    """Laurent table of omega(z, w) = prod_i (1 + a_i z w); support {(i, i)}."""
    coeffs = {(0, 0): 1.0}
    for a in spec.factors:
        new: dict[tuple[int, int], float] = {}
        for (p, q), v in coeffs.items():
            new[(p, q)] = new.get((p, q), 0.0) + v
            new[(p + 1, q + 1)] = new.get((p + 1, q + 1), 0.0) + v * a
        coeffs = new
    return coeffs


def homogeneous_corner(spec: WeightSpec) -> np.ndarray:
    """Coefficients gamma_i of w^{N_f} omega(z, 1/w) = sum_i gamma_i z^i w^{N_f - i}.

    These are the elementary symmetric functions of the factor parameters.
    """
    g = np.zeros(spec.n_f + 1)
    g[0] = 1.0
    for a in spec.factors:
        g[1:] = g[1:] + a * g[:-1].copy()
    return g


def is_stable(spec: WeightSpec, y_samples: int = 129, tol: float = 1e-9) -> StabilityReport:
    """Certify h(., y) zero-free on |z| <= 1 for all y in [-1, 1].

    Product specs are certified analytically: every factor has both roots
    of modulus 1/|a_i| > 1 uniformly in y.  Generic specs are sampled on a
    Chebyshev y-grid (plus the endpoints); this is a numerical
    certificate with an explicit margin, not a proof.
    """
    if y_samples < 2:
        raise ValueError("y_samples must be >= 2")
    if spec.variant == PRODUCT_OMEGA:
        mods = [1.0 / abs(a) for a in spec.factors]
        mn = min(mods, default=float("inf"))
        return StabilityReport(mn > 1.0 + tol, mn, None, "analytic", (), tol)

    ys = np.cos(np.pi * (2 * np.arange(y_samples) + 1) / (2 * y_samples))
    ys = np.concatenate([ys, [-1.0, 1.0]])
    min_mod = float("inf")
    witness = None
    drops: list[float] = []
    for y in ys:
        c = np.array([float(hi(y)) for hi in spec.h])  # z^0 .. z^N
        scale = np.max(np.abs(c))
        nz = len(c)
        while nz > 1 and abs(c[nz - 1]) <= 1e-14 * scale:
            nz -= 1
        if nz < len(c):
            drops.append(float(y))
        if nz <= 1:
            continue
        roots = np.roots(c[:nz][::-1])
        m = float(np.min(np.abs(roots)))
        if m < min_mod:
            min_mod, witness = m, float(y)
    return StabilityReport(min_mod > 1.0 + tol, min_mod, witness, "sampled", tuple(drops), tol)


# -- JSON config ------------------------------------------------------------


def spec_from_config(cfg: dict) -> WeightSpec:
    """Weight config: {"product": [a1, ...]} or {"generic_h": [[...], ...]}."""
    if "product" in cfg:
        a = [x for x in cfg["product"] if x != 0.0]
        return WeightSpec(factors=tuple(a))
    if "generic_h" in cfg:
        return generic_spec(cfg["generic_h"])
    raise InvalidWeightError("config needs a 'product' or 'generic_h' key")


def spec_to_config(spec: WeightSpec) -> dict:
    if spec.variant == PRODUCT_OMEGA:
        return {"product": list(spec.factors)}
    return {"generic_h": [[float(c) for c in hi.to_basis(MONOMIAL).coeffs] for hi in spec.h]}


def chebyshev_spec() -> WeightSpec:
    """The trivial weight h = 1 (product Chebyshev measure), as the empty
    product so all product-only constructions degenerate cleanly."""
    return WeightSpec(factors=())
