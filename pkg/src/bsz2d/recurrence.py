"""Block recurrence matrices and their structural verification.

Total-degree ordering (level n):

    x P_n = A_x P_{n+1} + B_x P_n + A_{x,n-1}^t P_{n-1}

with A_x of shape (n+1) x (n+2) and B_x symmetric (n+1) x (n+1); same
for y.  Lexicographical ordering (window column m):

    x p_{n,m} = A_{n+1,m} p_{n+1,m} + B_{n,m} p_{n,m} + A_{n,m}^t p_{n-1,m}

with A_{n,m} = <x p_{n-1,m}, p_{n,m}> lower triangular.  Beyond
weight-dependent corner blocks the matrices freeze into half-shift
patterns, which the verify_* functions assert entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .moment_oracle import oracle_for
from .ortho import LEX, REVLEX, TOTAL, OrthoSystem
from .poly_core import BivariatePoly, mul, u_index
from .total_order import build_total_vector
from .lex_order import lex_system
from .weights import PRODUCT_OMEGA, WeightSpec


class ConstructionInconsistencyError(RuntimeError):
    """The three-term residual of the built systems exceeds tolerance."""


def _x_poly() -> BivariatePoly:
    from .poly_core import CHEB_U, UnivariatePoly

    return BivariatePoly.from_separable(UnivariatePoly(CHEB_U, [0.0, 0.5]), u_index(0))


def _y_poly() -> BivariatePoly:
    from .poly_core import CHEB_U, UnivariatePoly

    return BivariatePoly.from_separable(u_index(0), UnivariatePoly(CHEB_U, [0.0, 0.5]))


def _pairing(spec: WeightSpec, mult: BivariatePoly, rows: OrthoSystem, cols: OrthoSystem) -> np.ndarray:
    orc = oracle_for(spec)
    out = np.zeros((len(rows.entries), len(cols.entries)))
    for i, (_, p) in enumerate(rows.entries):
        xp = mul(p, mult)
        for j, (_, q) in enumerate(cols.entries):
            out[i, j] = orc.inner(xp, q)
    return out


@dataclass
class BlockRecurrence:
    """Recurrence blocks at one level; lex blocks live in ``a``/``b``,
    total-degree blocks in the per-variable fields."""

    ordering: str
    level: tuple[int, ...]
    a_x: np.ndarray | None = None
    b_x: np.ndarray | None = None
    a_y: np.ndarray | None = None
    b_y: np.ndarray | None = None
    a: np.ndarray | None = None
    b: np.ndarray | None = None
    residual: float = 0.0


def total_blocks(spec: WeightSpec, n: int, tol: float = 1e-7) -> BlockRecurrence:
    """A_x, B_x, A_y, B_y at level n, with the three-term residual checked."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p_n = build_total_vector(spec, n)
    p_up = build_total_vector(spec, n + 1)
    p_dn = build_total_vector(spec, n - 1) if n > 0 else None
    xp, yp = _x_poly(), _y_poly()
    a_x = _pairing(spec, xp, p_n, p_up)
    b_x = _pairing(spec, xp, p_n, p_n)
    a_y = _pairing(spec, yp, p_n, p_up)
    b_y = _pairing(spec, yp, p_n, p_n)
    res = 0.0
    for mult, a, b in ((xp, a_x, b_x), (yp, a_y, b_y)):
        a_prev = _pairing(spec, mult, p_dn, p_n) if p_dn is not None else None
        for i, (_, p) in enumerate(p_n.entries):
            acc = mul(p, mult)
            for j, (_, q) in enumerate(p_up.entries):
                acc = acc + q.scale(-a[i, j])
            for j, (_, q) in enumerate(p_n.entries):
                acc = acc + q.scale(-b[i, j])
            if p_dn is not None:
                for j, (_, q) in enumerate(p_dn.entries):
                    acc = acc + q.scale(-a_prev[j, i])
            res = max(res, float(np.max(np.abs(acc.coeffs), initial=0.0)))
    if res > tol:
        raise ConstructionInconsistencyError(f"three-term residual {res:.3e} at level {n}")
    return BlockRecurrence(TOTAL, (n,), a_x=a_x, b_x=b_x, a_y=a_y, b_y=b_y, residual=res)


def lex_blocks(spec: WeightSpec, n: int, m: int, tol: float = 1e-7, ordering: str = LEX) -> BlockRecurrence:
    """A_{n,m} and B_{n,m} (or the revlex mirror, where the roles of the
    variables and of n, m are exchanged)."""
    if ordering == LEX:
        if n < 1:
            raise ValueError("need n >= 1 for A_{n,m}")
        sys_hi = lex_system(spec, n, m, LEX).slice_first(n)
        sys_lo = lex_system(spec, n - 1, m, LEX).slice_first(n - 1)
        mult = _x_poly()
        size = m + 1
    elif ordering == REVLEX:
        if m < 1:
            raise ValueError("need m >= 1 for the revlex block")
        sys_hi = lex_system(spec, n, m, REVLEX).slice_first(m)
        sys_lo = lex_system(spec, n, m - 1, REVLEX).slice_first(m - 1)
        mult = _y_poly()
        size = n + 1
    else:
        raise ValueError("ordering must be lex or revlex")
    a = _pairing(spec, mult, sys_lo, sys_hi)
    b = _pairing(spec, mult, sys_hi, sys_hi)
    if a.shape != (size, size) or b.shape != (size, size):
        raise ConstructionInconsistencyError("unexpected block shape")
    res = float(np.max(np.abs(b - b.T)))
    if res > tol:
        raise ConstructionInconsistencyError(f"B asymmetry {res:.3e}")
    return BlockRecurrence(ordering, (n, m), a=a, b=b, residual=res)


# ---------------------------------------------------------------------------
# Structure verification
# ---------------------------------------------------------------------------


@dataclass
class StructureReport:
    ok: bool
    sizes: dict[str, int]
    violations: list[tuple[str, int, int, float]] = field(default_factory=list)
    seam: dict[tuple[int, int], float] = field(default_factory=dict)
    blocks: BlockRecurrence | None = None


def _check_zero(name: str, mat: np.ndarray, cells, tol: float, out: list):
    for i, j in cells:
        v = float(mat[i, j])
        if abs(v) > tol:
            out.append((name, i, j, v))


def verify_total_structure(spec: WeightSpec, n: int, tol: float = 1e-8) -> StructureReport:
    """Assert the frozen block patterns of the total-degree recurrence.

    With N the z-degree of the weight: A_y = diag(C_y, half-identity)
    with a trailing zero column, C_y lower triangular of size
    ceil((N-1)/2) with positive diagonal; B_y = diag(D_y, 0) with D_y of
    size ceil((N-2)/2); A_x has half-shift rows below the lower-Hessenberg
    corner C_x of size ceil((N+1)/2); B_x = diag(D_x, 0) with D_x of size
    ceil(N/2).  Entries at the ambiguous C_x seam are reported verbatim
    rather than asserted.
    """
    big_n = spec.n_h
    c_y = big_n // 2  # ceil((N-1)/2)
    c_x = big_n // 2 + 1  # ceil((N+1)/2)
    d_y = max(0, (big_n - 1) // 2)  # ceil((N-2)/2)
    d_x = (big_n + 1) // 2  # ceil(N/2)
    if n < c_y:
        raise ValueError(f"theorem applies for n >= {c_y}")
    blocks = total_blocks(spec, n)
    bad: list[tuple[str, int, int, float]] = []

    a_y = blocks.a_y
    _check_zero("A_y", a_y, [(i, j) for i in range(n + 1) for j in range(n + 2) if j > i], tol, bad)
    _check_zero(
        "A_y", a_y, [(i, j) for i in range(c_y, n + 1) for j in range(i) ], tol, bad
    )
    for i in range(n + 1):
        if i >= c_y and abs(a_y[i, i] - 0.5) > tol:
            bad.append(("A_y diag", i, i, float(a_y[i, i])))
        if i < min(c_y, n + 1) and a_y[i, i] <= 0.0:
            bad.append(("C_y diag", i, i, float(a_y[i, i])))

    b_y = blocks.b_y
    _check_zero(
        "B_y", b_y,
        [(i, j) for i in range(n + 1) for j in range(n + 1) if i >= d_y or j >= d_y], tol, bad,
    )

    a_x = blocks.a_x
    seam = {}
    for i in range(n + 1):
        for j in range(n + 2):
            v = float(a_x[i, j])
            if j > i + 1 and abs(v) > tol:
                bad.append(("A_x", i, j, v))
            elif i >= c_x:
                if j == i + 1:
                    if abs(v - 0.5) > tol:
                        bad.append(("A_x shift", i, j, v))
                elif abs(v) > tol:
                    bad.append(("A_x", i, j, v))
            elif j <= min(c_x, i + 1) and (j == c_x or i == c_x - 1):
                seam[(i, j)] = v
        if a_x[i, i + 1] <= 0.0:
            bad.append(("A_x superdiag", i, i + 1, float(a_x[i, i + 1])))

    b_x = blocks.b_x
    _check_zero(
        "B_x", b_x,
        [(i, j) for i in range(n + 1) for j in range(n + 1) if i >= d_x or j >= d_x], tol, bad,
    )
    for name, mat in (("B_x sym", b_x), ("B_y sym", b_y)):
        dev = float(np.max(np.abs(mat - mat.T), initial=0.0))
        if dev > tol:
            bad.append((name, -1, -1, dev))

    sizes = {"C_y": c_y, "D_y": d_y, "C_x": c_x, "D_x": d_x}
    return StructureReport(not bad, sizes, bad, seam, blocks)


def verify_lex_structure(spec: WeightSpec, n: int, m: int, tol: float = 1e-8) -> StructureReport:
    """Assert the lex pattern A = diag(1/2 I_{m-kappa+1}, C), B = diag(0, D),
    and for product weights past 2 N_f the full collapse A = 1/2 I, B = 0."""
    kappa = spec.kappa
    if n < spec.n_h // 2 + 1:
        raise ValueError(f"theorem applies for n >= {spec.n_h // 2 + 1}")
    if m < kappa:
        raise ValueError("window too narrow for the corner block")
    blocks = lex_blocks(spec, n, m)
    a, b = blocks.a, blocks.b
    cut = m - kappa + 1
    bad: list[tuple[str, int, int, float]] = []
    for i in range(m + 1):
        for j in range(m + 1):
            v = float(a[i, j])
            if i < cut or j < cut:
                want = 0.5 if i == j else 0.0
                if abs(v - want) > tol:
                    bad.append(("A", i, j, v))
            elif j > i and abs(v) > tol:
                bad.append(("C", i, j, v))
            v = float(b[i, j])
            if (i < cut or j < cut) and abs(v) > tol:
                bad.append(("B", i, j, v))
    for i in range(cut, m + 1):
        if a[i, i] <= 0.0:
            bad.append(("C diag", i, i, float(a[i, i])))
    if spec.variant == PRODUCT_OMEGA and min(n, m) > 2 * spec.n_f:
        dev_a = float(np.max(np.abs(a - 0.5 * np.eye(m + 1))))
        dev_b = float(np.max(np.abs(b)))
        if dev_a > tol:
            bad.append(("A collapse", -1, -1, dev_a))
        if dev_b > tol:
            bad.append(("B collapse", -1, -1, dev_b))
    sizes = {"C": kappa, "D": kappa, "identity": cut}
    return StructureReport(not bad, sizes, bad, {}, blocks)


def mixed_action_deviation(spec: WeightSpec, n: int) -> float:
    """Deviation between the two block expansions of (xy) P_n.

    Expanding xy P_n through the x-recurrence then y, or y then x, gives
    matrix identities at the levels n+2, n+1 and n; returns the largest
    entrywise mismatch (zero exactly when the finite blocks commute the
    way the infinite block Jacobi operators do).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    blk = {lev: total_blocks(spec, lev) for lev in (n - 1, n, n + 1)}
    ax, bx = blk[n].a_x, blk[n].b_x
    ay, by = blk[n].a_y, blk[n].b_y
    ax1, ay1 = blk[n + 1].a_x, blk[n + 1].a_y
    bx1, by1 = blk[n + 1].b_x, blk[n + 1].b_y
    axp, ayp = blk[n - 1].a_x, blk[n - 1].a_y
    dev = 0.0
    # coefficient of P_{n+2}
    dev = max(dev, float(np.max(np.abs(ax @ ay1 - ay @ ax1))))
    # coefficient of P_{n+1}
    dev = max(dev, float(np.max(np.abs(ax @ by1 + bx @ ay - (ay @ bx1 + by @ ax)))))
    # coefficient of P_n
    lhs = ax @ ay.T + bx @ by + axp.T @ ayp
    rhs = ay @ ax.T + by @ bx + ayp.T @ axp
    dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    return dev
