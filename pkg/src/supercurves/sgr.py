"""Finite-rank truncation of the super Grassmannian.

The ambient module has basis e_i = z^i (integer i) and e_{i-1/2} = z^i theta,
indexed by half-integers.  Internally every index is doubled (d = 2i) so that
even d labels the z-lines and odd d the theta-lines.  A truncation window M
keeps -M < i <= M; frames have rows over the whole window and columns over the
non-positive indices, and the "minus" block of a frame is the square piece the
Berezinian ratios act on.

Truncation replaces the trace-class analysis of the infinite theory:
admissibility is automatic at finite rank, flows are band matrices whose
exponentials terminate inside the window, and window-edge effects are the sole
discretization error (monitored, never silently ignored).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .errors import BigCellError, DimensionError, DomainError, ParityError
from .grassmann import GrassmannScalar, as_grassmann
from .supermatrix import (
    SuperMatrix,
    berezinian,
    berezinian_star,
    invert_matrix,
    substitution_functional,
)

SymbolKey = Tuple[int, int]          # (z power, theta flag)
Entries = Dict[Tuple[int, int], GrassmannScalar]   # (row d, col d) -> value


@dataclass(frozen=True)
class TruncationWindow:
    """Symmetric index window -M < i <= M over the half-integers (doubled ints)."""

    M: int

    def __post_init__(self):
        if self.M < 2:
            raise DimensionError("window must satisfy M >= 2")

    @property
    def indices(self) -> List[int]:
        return list(range(-2 * self.M + 1, 2 * self.M + 1))

    @property
    def neg_indices(self) -> List[int]:
        return list(range(-2 * self.M + 1, 1))

    @property
    def pos_indices(self) -> List[int]:
        return list(range(1, 2 * self.M + 1))

    def contains(self, d: int) -> bool:
        return -2 * self.M < d <= 2 * self.M

    @staticmethod
    def parity(d: int) -> int:
        return d & 1

    def super_order(self, ds: Sequence[int]) -> List[int]:
        """Even indices first (ascending), then odd indices (ascending)."""
        evens = [d for d in ds if d % 2 == 0]
        odds = [d for d in ds if d % 2]
        return evens + odds


def basis_label(d: int) -> str:
    """Symbol of the basis vector with doubled index d."""
    if d % 2 == 0:
        return f"z^{d // 2}"
    return f"z^{(d + 1) // 2}*theta"


# -- sparse operators over the window -------------------------------------------------


@dataclass
class WindowOperator:
    """Sparse matrix acting on the window basis, entries over Lambda."""

    window: TruncationWindow
    n: int
    entries: Entries = field(default_factory=dict)

    def add(self, row: int, col: int, value: GrassmannScalar) -> None:
        if not value.terms:
            return
        key = (row, col)
        cur = self.entries.get(key)
        s = value if cur is None else cur + value
        if s.terms:
            self.entries[key] = s
        else:
            self.entries.pop(key, None)

    def __matmul__(self, other: "WindowOperator") -> "WindowOperator":
        rows: Dict[int, List[Tuple[int, GrassmannScalar]]] = {}
        for (r, c), v in other.entries.items():
            rows.setdefault(r, []).append((c, v))
        out = WindowOperator(self.window, self.n)
        for (r, k), v in self.entries.items():
            for c, w in rows.get(k, ()):
                out.add(r, c, v * w)
        return out

    def __add__(self, other: "WindowOperator") -> "WindowOperator":
        out = WindowOperator(self.window, self.n, dict(self.entries))
        for (r, c), v in other.entries.items():
            out.add(r, c, v)
        return out

    def scale(self, c) -> "WindowOperator":
        return WindowOperator(self.window, self.n,
                              {k: v * c for k, v in self.entries.items()})

    def commutator(self, other: "WindowOperator") -> "WindowOperator":
        return (self @ other) + (other @ self).scale(-1.0)

    def restrict(self, rows: Iterable[int], cols: Iterable[int]) -> "WindowOperator":
        rset, cset = set(rows), set(cols)
        return WindowOperator(self.window, self.n,
                              {(r, c): v for (r, c), v in self.entries.items()
                               if r in rset and c in cset})

    def block(self, which: str) -> "WindowOperator":
        """H_-/H_+ block: 'a' (-,-), 'b' (-,+), 'c' (+,-), 'd' (+,+)."""
        rneg = which in ("a", "b")
        cneg = which in ("a", "c")
        return WindowOperator(self.window, self.n,
                              {(r, c): v for (r, c), v in self.entries.items()
                               if (r <= 0) == rneg and (c <= 0) == cneg})

    def supertrace(self, indices: Iterable[int] | None = None) -> GrassmannScalar:
        """Sum of even diagonal entries minus sum of odd diagonal entries."""
        allowed = set(indices) if indices is not None else None
        acc = GrassmannScalar.zero(self.n)
        for (r, c), v in self.entries.items():
            if r != c:
                continue
            if allowed is not None and r not in allowed:
                continue
            acc = acc + (v if r % 2 == 0 else -v)
        return acc

    def is_even(self) -> bool:
        for (r, c), v in self.entries.items():
            want = (r + c) & 1
            par = v.parity()
            if par is None or (v.terms and par != want):
                return False
        return True

    def identity_plus(self) -> "WindowOperator":
        out = WindowOperator(self.window, self.n, dict(self.entries))
        one = GrassmannScalar.one(self.n)
        for d in self.window.indices:
            out.add(d, d, one)
        return out

    def max_band_shift(self) -> int:
        return max((abs(r - c) for (r, c) in self.entries), default=0)


def identity_operator(window: TruncationWindow, n: int) -> WindowOperator:
    op = WindowOperator(window, n)
    one = GrassmannScalar.one(n)
    for d in window.indices:
        op.entries[(d, d)] = one
    return op


def multiplication_matrix(window: TruncationWindow, symbol: Mapping, n: int,
                          check_even: bool = True) -> Tuple[WindowOperator, bool]:
    """Band matrix of a multiplication/derivation symbol in the e-basis.

    ``symbol`` maps keys to Lambda coefficients; supported keys:
      ("z", m)        multiplication by z^m          (even coefficient)
      ("ztheta", m)   multiplication by z^m theta    (odd coefficient)
      ("lambda", nn)  z^-nn (1 - theta d/dtheta)
      ("f", nn)       z^-nn d/dtheta
      ("mu", nn)      z^-nn theta d/dtheta
      ("e", nn)       z^-nn theta

    Returns the operator and a truncation-warning flag set when the band is
    too wide for the window (shifts larger than half the window span).
    """
    # doubled row shift per column parity: kind -> (even-column shift, odd-column shift)
    def shifts(kind: str, m: int):
        if kind == "z":
            return 2 * m, 2 * m
        if kind == "ztheta":
            return 2 * m - 1, None
        if kind == "lambda":
            return -2 * m, None
        if kind == "f":
            return None, -2 * m + 1
        if kind == "mu":
            return None, -2 * m
        if kind == "e":
            return -2 * m - 1, None
        raise DomainError(f"unknown symbol kind {kind!r}")

    op = WindowOperator(window, n)
    warn = False
    inside = window.contains
    for (kind, m), coeff in symbol.items():
        coeff = as_grassmann(coeff, n)
        if not coeff.terms:
            continue
        even_shift, odd_shift = shifts(kind, m)
        if check_even:
            any_shift = even_shift if even_shift is not None else odd_shift
            want = any_shift & 1
            par = coeff.parity()
            if par is None or par != want:
                raise ParityError(f"coefficient parity breaks evenness for {kind}({m})")
        for d in window.indices:
            shift = even_shift if d % 2 == 0 else odd_shift
            if shift is None:
                continue
            r = d + shift
            if inside(r):
                op.add(r, d, coeff)
        max_shift = max(abs(s) for s in (even_shift, odd_shift) if s is not None)
        if max_shift > 2 * window.M:
            warn = True  # band wider than half the window: edge effects dominate
    return op, warn


def symbol_of_jheis(coeffs: Mapping[SymbolKey, GrassmannScalar]) -> Dict:
    """Convert {(m, theta_flag): coeff} into multiplication_matrix keys."""
    out = {}
    for (m, t), c in coeffs.items():
        out[("ztheta" if t else "z", m)] = c
    return out


# -- symbols in Lambda[z, z^-1, theta] --------------------------------------------------


def symbol_mul(a: Mapping[SymbolKey, GrassmannScalar], b: Mapping[SymbolKey, GrassmannScalar],
               n: int) -> Dict[SymbolKey, GrassmannScalar]:
    """Product of Laurent symbols; theta^2 = 0 and coefficients supercommute past theta."""
    out: Dict[SymbolKey, GrassmannScalar] = {}
    for (m1, t1), c1 in a.items():
        for (m2, t2), c2 in b.items():
            if t1 and t2:
                continue
            c = c1 * c2
            if t1 and c2.terms:
                par = c2.parity()
                if par is None:
                    raise ParityError("mixed-parity symbol coefficient")
                if par == 1:
                    c = -c1 * c2  # move c2 past theta
            if not c.terms:
                continue
            key = (m1 + m2, t1 | t2)
            cur = out.get(key)
            s = c if cur is None else cur + c
            if s.terms:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def symbol_log_unipotent(u: Mapping[SymbolKey, GrassmannScalar], n: int,
                         max_power: int = 12) -> Dict[SymbolKey, GrassmannScalar]:
    """log(1 + u) for a symbol u with nilpotent coefficients (terminating series)."""
    out: Dict[SymbolKey, GrassmannScalar] = {}
    power = dict(u)
    sign = 1.0
    for k in range(1, max_power + 1):
        if not power:
            break
        for key, c in power.items():
            term = c * (sign / k)
            cur = out.get(key)
            s = term if cur is None else cur + term
            if s.terms:
                out[key] = s
            else:
                out.pop(key, None)
        power = symbol_mul(power, u, n)
        sign = -sign
    if power:
        raise DomainError("log series did not terminate; coefficients not nilpotent")
    return out


# -- frames ------------------------------------------------------------------------------


@dataclass
class TruncatedFrame:
    """Admissible-frame window: rows over the full window, columns over i <= 0."""

    window: TruncationWindow
    n: int
    entries: List[List[GrassmannScalar]]

    def __post_init__(self):
        rows = len(self.window.indices)
        cols = len(self.window.neg_indices)
        if len(self.entries) != rows or any(len(r) != cols for r in self.entries):
            raise DimensionError(f"frame grid must be {rows}x{cols}")

    def require_even(self) -> None:
        rds = self.window.indices
        cds = self.window.neg_indices
        for i, rd in enumerate(rds):
            for j, cd in enumerate(cds):
                e = self.entries[i][j]
                if not e.terms:
                    continue
                if e.parity() != ((rd + cd) & 1):
                    raise ParityError(f"frame entry ({rd/2}, {cd/2}) has wrong parity")

    def row_of(self, d: int) -> List[GrassmannScalar]:
        return list(self.entries[self.window.indices.index(d)])

    def body_rank_defect(self) -> int:
        neg = self.window.neg_indices
        rows = [self.entries[self.window.indices.index(d)] for d in neg]
        body = np.array([[e.body for e in row] for row in rows], dtype=complex)
        return len(neg) - int(np.linalg.matrix_rank(body, tol=1e-9))


def standard_frame(window: TruncationWindow, n: int) -> TruncatedFrame:
    rows = window.indices
    cols = window.neg_indices
    ent = [[GrassmannScalar.one(n) if rd == cd else GrassmannScalar.zero(n) for cd in cols]
           for rd in rows]
    return TruncatedFrame(window, n, ent)


def apply_operator(op: WindowOperator, frame: TruncatedFrame) -> TruncatedFrame:
    """Matrix product op . frame inside the window."""
    window = frame.window
    rows = window.indices
    pos = {d: i for i, d in enumerate(rows)}
    cols = len(window.neg_indices)
    n = frame.n
    out = [[GrassmannScalar.zero(n) for _ in range(cols)] for _ in rows]
    for (r, k), v in op.entries.items():
        src = frame.entries[pos[k]]
        dst = out[pos[r]]
        for j in range(cols):
            e = src[j]
            if e.terms:
                dst[j] = dst[j] + v * e
    return TruncatedFrame(window, n, out)


def frame_change_columns(frame: TruncatedFrame, T: List[List[GrassmannScalar]]) -> TruncatedFrame:
    """frame . T for a square column transition over the neg indices (window order)."""
    window = frame.window
    cols = len(window.neg_indices)
    n = frame.n
    out = []
    for row in frame.entries:
        new_row = [GrassmannScalar.zero(n) for _ in range(cols)]
        for r in range(cols):
            e = row[r]
            if not e.terms:
                continue
            Tr = T[r]
            for j in range(cols):
                t = Tr[j]
                if t.terms:
                    new_row[j] = new_row[j] + e * t
        out.append(new_row)
    return TruncatedFrame(window, n, out)


def exp_band_apply(band: WindowOperator, frame: TruncatedFrame,
                   prefactor: float = 1.0) -> TruncatedFrame:
    """exp(prefactor * band) . frame; exact because the band is strictly triangular."""
    window = frame.window
    upper = all(r < c for (r, c) in band.entries)
    lower = all(r > c for (r, c) in band.entries)
    if not (upper or lower):
        raise DomainError("band must be strictly triangular for an exact exponential")
    total = [list(row) for row in frame.entries]
    current = frame
    span = 4 * window.M
    k = 1
    while k <= span:
        current = apply_operator(band.scale(prefactor / k), current)
        if all(not e.terms for row in current.entries for e in row):
            break
        for i, row in enumerate(current.entries):
            for j, e in enumerate(row):
                if e.terms:
                    total[i][j] = total[i][j] + e
        k += 1
    return TruncatedFrame(window, frame.n, total)


# -- minus block and the big cell -----------------------------------------------------


def _super_permutation(window: TruncationWindow) -> Tuple[List[int], List[int]]:
    """(super ordered neg indices, positions in window order)."""
    neg = window.neg_indices
    ordered = window.super_order(neg)
    win_pos = {d: i for i, d in enumerate(neg)}
    return ordered, [win_pos[d] for d in ordered]


def minus_block(frame: TruncatedFrame) -> SuperMatrix:
    """The square W_- piece as an even supermatrix (even lines first)."""
    window = frame.window
    ordered, perm = _super_permutation(window)
    k = sum(1 for d in ordered if d % 2 == 0)
    l = len(ordered) - k
    rows = window.indices
    grid = []
    for d in ordered:
        row = frame.entries[rows.index(d)]
        grid.append([row[p] for p in perm])
    return SuperMatrix((k, l), (k, l), grid)


def reorder_row_to_super(frame: TruncatedFrame, d: int) -> List[GrassmannScalar]:
    """Row of the frame at window index d, columns in super (even-first) order."""
    _, perm = _super_permutation(frame.window)
    row = frame.row_of(d)
    return [row[p] for p in perm]


def big_cell_test(frame: TruncatedFrame) -> Tuple[bool, TruncatedFrame | None]:
    """True iff A = W_- is invertible over Lambda; also returns W A^-1 when it is."""
    frame.require_even()
    if frame.body_rank_defect() > 0:
        return False, None
    A = minus_block(frame)
    Ainv = invert_matrix(A)
    # back to window column order
    ordered, perm = _super_permutation(frame.window)
    cols = len(ordered)
    inv_perm = [0] * cols
    for super_pos, win_pos in enumerate(perm):
        inv_perm[win_pos] = super_pos
    T = [[Ainv.entries[inv_perm[r]][inv_perm[c]] for c in range(cols)] for r in range(cols)]
    return True, frame_change_columns(frame, T)


@dataclass
class BakerVectors:
    """Even and odd Baker vectors, from the normalized frame and the Cramer route."""

    window: TruncationWindow
    w_even: Dict[int, GrassmannScalar]
    w_odd: Dict[int, GrassmannScalar]
    w_even_cramer: Dict[int, GrassmannScalar]
    w_odd_cramer: Dict[int, GrassmannScalar]

    def route_discrepancy(self) -> float:
        worst = 0.0
        for d, v in self.w_even_cramer.items():
            worst = max(worst, (self.w_even.get(d, v * 0) - v).norm_inf())
        for d, v in self.w_odd_cramer.items():
            worst = max(worst, (self.w_odd.get(d, v * 0) - v).norm_inf())
        return worst


def baker_vectors(frame: TruncatedFrame) -> BakerVectors:
    """Columns 0 and -1/2 of the normalized frame, with the Berezinian-ratio route.

    Coefficient of e_i: ber(A_0(r_i))/ber(A) on the even column and
    ber*(A_{-1/2}(r_i))/ber*(A) on the odd column.
    """
    ok, normalized = big_cell_test(frame)
    if not ok:
        raise BigCellError("frame is not in the big cell")
    window = frame.window
    neg = window.neg_indices
    col0 = neg.index(0)
    colm1 = neg.index(-1)
    rows = window.indices
    w_even = {d: normalized.entries[i][col0] for i, d in enumerate(rows)
              if normalized.entries[i][col0].terms}
    w_odd = {d: normalized.entries[i][colm1] for i, d in enumerate(rows)
             if normalized.entries[i][colm1].terms}

    A = minus_block(frame)
    ordered, _ = _super_permutation(window)
    pos0 = ordered.index(0)
    posm1 = ordered.index(-1)
    ber_A_inv = berezinian(A).invert()
    ber_star_A_inv = berezinian_star(A).invert()
    sub_even = substitution_functional(A, pos0, star=False)
    sub_odd = substitution_functional(A, posm1, star=True)
    w_even_c: Dict[int, GrassmannScalar] = {}
    w_odd_c: Dict[int, GrassmannScalar] = {}
    for d in window.pos_indices:
        r = reorder_row_to_super(frame, d)
        ce = sub_even(r) * ber_A_inv
        co = sub_odd(r) * ber_star_A_inv
        if ce.terms:
            w_even_c[d] = ce
        if co.terms:
            w_odd_c[d] = co
    return BakerVectors(window, w_even, w_odd, w_even_c, w_odd_c)


def baker_functions(frame: TruncatedFrame) -> Tuple[Dict[SymbolKey, GrassmannScalar],
                                                    Dict[SymbolKey, GrassmannScalar]]:
    """Baker vectors written as Laurent symbols via e_i = z^i, e_{i-1/2} = z^i theta."""
    vec = baker_vectors(frame)

    def to_symbol(col: Dict[int, GrassmannScalar]) -> Dict[SymbolKey, GrassmannScalar]:
        out: Dict[SymbolKey, GrassmannScalar] = {}
        for d, v in col.items():
            if d % 2 == 0:
                out[(d // 2, 0)] = v
            else:
                out[((d + 1) // 2, 1)] = v
        return out

    return to_symbol(vec.w_even), to_symbol(vec.w_odd)


# -- Heisenberg flows and tau functions --------------------------------------------------


@dataclass
class HeisenbergElement:
    """Finitely supported flow coefficients t_s, s > 0 in (1/2) Z (doubled keys).

    Even s2 = 2i pairs with multiplication by z^-i (even coefficient); odd
    s2 = 2i-1 pairs with z^-i theta (odd coefficient).
    """

    n: int
    coeffs: Dict[int, GrassmannScalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for s2, c in self.coeffs.items():
            if s2 <= 0:
                raise DimensionError("flow indices must be positive")
            c = as_grassmann(c, self.n)
            if not c.terms:
                continue
            want = s2 & 1
            par = c.parity()
            if par is None or par != want:
                raise ParityError(f"flow t_{s2 / 2} must have parity {want}")
            clean[s2] = c
        self.coeffs = clean

    def symbol(self) -> Dict[SymbolKey, GrassmannScalar]:
        out: Dict[SymbolKey, GrassmannScalar] = {}
        for s2, c in self.coeffs.items():
            if s2 % 2 == 0:
                out[(-s2 // 2, 0)] = c
            else:
                out[(-(s2 + 1) // 2, 1)] = c
        return out

    def max_shift(self) -> int:
        """Largest doubled band shift of the flow generator."""
        worst = 0
        for s2 in self.coeffs:
            worst = max(worst, s2 if s2 % 2 == 0 else s2 + 2)
        return worst

    def __add__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        out = dict(self.coeffs)
        for s2, c in other.coeffs.items():
            cur = out.get(s2)
            out[s2] = c if cur is None else cur + c
        return HeisenbergElement(self.n, out)

    @classmethod
    def from_symbol(cls, sym: Mapping[SymbolKey, GrassmannScalar], n: int) -> "HeisenbergElement":
        coeffs: Dict[int, GrassmannScalar] = {}
        for (m, t), c in sym.items():
            if m >= 0:
                raise DimensionError("flow symbols live in z^-1 Lambda[z^-1, theta]")
            coeffs[-2 * m if t == 0 else -2 * m - 1] = c
        return cls(n, coeffs)


def flow_band(window: TruncationWindow, t: HeisenbergElement) -> Tuple[WindowOperator, bool]:
    return multiplication_matrix(window, symbol_of_jheis(t.symbol()), t.n)


@dataclass
class TauValue:
    """tau and tau* of a flowed frame; finite=False flags leaving the big cell."""

    finite: bool
    tau: GrassmannScalar | None
    tau_star: GrassmannScalar | None
    truncation_warning: bool = False


def tau(frame: TruncatedFrame, t: HeisenbergElement) -> TauValue:
    """tau_W(t) = ber([gamma(t)^-1 W]_-) / ber(W_-), and the ber* variant."""
    frame.require_even()
    if frame.body_rank_defect() > 0:
        raise BigCellError("base frame is not in the big cell")
    window = frame.window
    band, warn = flow_band(window, t)
    warn = warn or (t.max_shift() * 2 > window.M)
    flowed = exp_band_apply(band, frame, prefactor=-1.0)
    if flowed.body_rank_defect() > 0:
        return TauValue(finite=False, tau=None, tau_star=None, truncation_warning=warn)
    A0 = minus_block(frame)
    At = minus_block(flowed)
    value = berezinian(At) * berezinian(A0).invert()
    value_star = berezinian_star(At) * berezinian_star(A0).invert()
    return TauValue(finite=True, tau=value, tau_star=value_star, truncation_warning=warn)


def flowed_frame(frame: TruncatedFrame, t: HeisenbergElement) -> TruncatedFrame:
    """gamma(t)^-1 . W inside the window."""
    band, _ = flow_band(frame.window, t)
    return exp_band_apply(band, frame, prefactor=-1.0)


# -- Baker-tau quotient ---------------------------------------------------------------


def _apply_q0(window: TruncationWindow, u: complex, phi: GrassmannScalar,
              frame: TruncatedFrame) -> TruncatedFrame:
    """Q_0(u, phi) W within the window: rows r_i + sum u^k (r_{i+k} - phi r_{i+k-1/2}).

    The odd parameter multiplies the shifted theta-rows from the left (left
    row-multiples are the Berezinian-preserving operations); the sign makes the
    quotient agree with the coefficient-then-theta ordering of the Baker
    functions.
    """
    n = frame.n
    lam: Dict = {}
    fpart: Dict = {}
    for nn in range(1, 2 * window.M + 1):
        c = u ** nn
        if c == 0:
            break
        lam[("lambda", nn)] = GrassmannScalar.scalar(n, c)
        if phi.terms:
            fpart[("f", nn)] = GrassmannScalar.scalar(n, c)
    lam_op, _ = multiplication_matrix(window, lam, n)
    out = apply_operator(lam_op.identity_plus(), frame)
    if fpart:
        f_op, _ = multiplication_matrix(window, fpart, n, check_even=False)
        fw = apply_operator(f_op, frame)
        ent = [[a - phi * b for a, b in zip(ra, rb)]
               for ra, rb in zip(out.entries, fw.entries)]
        out = TruncatedFrame(window, n, ent)
    return out


def baker_tau_quotient_check(frame: TruncatedFrame, t: HeisenbergElement,
                             u_values: Sequence[complex],
                             phi: GrassmannScalar) -> dict:
    """Residuals of w(t; u, phi) = tau(t; Q)/tau(t) against the Baker vectors.

    Even side: ber([Q_0 W_t]_-)/ber([W_t]_-) as an honest matrix computation.
    Odd side: the ber*-row-substitution form of ber*([Q_1 W_t]_-) phi (the
    d/dphi column acts on nothing but the substituted row, so it contracts to
    two substituted Berezinians).  Both are compared coefficientwise with the
    normalized-frame Baker functions evaluated at (u, phi).
    """
    window = frame.window
    n = frame.n
    if phi.terms and phi.parity() != 1:
        raise ParityError("phi must be odd")
    wt = flowed_frame(frame, t)
    ok, _ = big_cell_test(wt)
    if not ok:
        raise BigCellError("flowed frame left the big cell")
    At = minus_block(wt)
    ber_At = berezinian(At)
    ber_star_At = berezinian_star(At)
    w_even_sym, w_odd_sym = baker_functions(wt)

    def eval_symbol(sym: Dict[SymbolKey, GrassmannScalar], u: complex) -> GrassmannScalar:
        acc = GrassmannScalar.zero(n)
        for (m, tflag), c in sym.items():
            term = c * (u ** m)
            if tflag:
                term = term * phi
            acc = acc + term
        return acc

    ordered, _ = _super_permutation(window)
    posm1 = ordered.index(-1)
    sub_odd = substitution_functional(At, posm1, star=True)

    report = {"even": {}, "odd": {}, "max_residual": 0.0}
    for u in u_values:
        # even: full matrix route
        q0w = _apply_q0(window, u, phi, wt)
        lhs_even = berezinian(minus_block(q0w)) * ber_At.invert()
        rhs_even = eval_symbol(w_even_sym, u)
        res_e = (lhs_even - rhs_even).norm_inf()
        # odd: substituted-row route for ber*([Q_1 W]_-) phi
        r_lambda = reorder_row_to_super(wt, -1)
        r_deriv = [GrassmannScalar.zero(n)] * len(r_lambda)
        for k in range(1, 2 * window.M + 1):
            ck = u ** k
            d_theta = 2 * k - 1
            d_plain = 2 * k
            if window.contains(d_theta):
                row = reorder_row_to_super(wt, d_theta)
                r_lambda = [a + b * ck for a, b in zip(r_lambda, row)]
            if window.contains(d_plain):
                row = reorder_row_to_super(wt, d_plain)
                r_deriv = [a + b * ck for a, b in zip(r_deriv, row)]
        lhs_odd = (sub_odd(r_lambda) * phi + sub_odd(r_deriv)) * ber_star_At.invert()
        rhs_odd = eval_symbol(w_odd_sym, u)
        res_o = (lhs_odd - rhs_odd).norm_inf()
        report["even"][u] = res_e
        report["odd"][u] = res_o
        report["max_residual"] = max(report["max_residual"], res_e, res_o)
    return report


# -- the gl(infinity|infinity) cocycle -----------------------------------------------


def cocycle(X: WindowOperator, Y: WindowOperator) -> GrassmannScalar:
    """c(X, Y) = Str(c_X b_Y) - Str(b_X c_Y) over the window blocks."""
    bX, cX = X.block("b"), X.block("c")
    bY, cY = Y.block("b"), Y.block("c")
    plus = (cX @ bY).supertrace(indices=[d for d in X.window.indices if d > 0])
    minus = (bX @ cY).supertrace(indices=[d for d in X.window.indices if d <= 0])
    return plus - minus


def cocycle_quarter_form(X: WindowOperator, Y: WindowOperator) -> GrassmannScalar:
    """(1/4) Str(J [J,X] [J,Y]), the equivalent supertrace form."""
    window, n = X.window, X.n
    J = WindowOperator(window, n)
    one = GrassmannScalar.one(n)
    for d in window.indices:
        J.entries[(d, d)] = one if d <= 0 else -one
    JX = J.commutator(X)
    JY = J.commutator(Y)
    return (J @ JX @ JY).supertrace() * 0.25


def jheis_projected_action(window: TruncationWindow, sym: Mapping[SymbolKey, GrassmannScalar],
                           n: int) -> WindowOperator:
    """pi_- of multiplication by a symbol, restricted to H_- (the a-block)."""
    op, _ = multiplication_matrix(window, symbol_of_jheis(dict(sym)), n, check_even=False)
    neg = window.neg_indices
    return op.restrict(neg, neg)


def jheis_commutator_supertrace(window: TruncationWindow,
                                sym_minus: Mapping[SymbolKey, GrassmannScalar],
                                sym_plus: Mapping[SymbolKey, GrassmannScalar],
                                n: int) -> GrassmannScalar:
    """Str_{H_-}([f_-, f_+]) for projected multiplication actions (vanishes)."""
    f_minus = jheis_projected_action(window, sym_minus, n)
    f_plus = jheis_projected_action(window, sym_plus, n)
    return f_minus.commutator(f_plus).supertrace(indices=window.neg_indices)


# -- random frames ------------------------------------------------------------------------


def random_big_cell_frame(rng, window: TruncationWindow, n: int, scale: float = 0.25,
                          bandwidth: int = 2) -> TruncatedFrame:
    """Identity-plus-band frame; small coefficients keep it in the big cell."""
    from .grassmann import random_element

    frame = standard_frame(window, n)
    rows = window.indices
    for i, rd in enumerate(rows):
        for j, cd in enumerate(window.neg_indices):
            if rd == cd:
                continue
            if abs(rd - cd) > 2 * bandwidth:
                continue
            parity = (rd + cd) & 1
            e = random_element(rng, n, parity=parity, scale=scale)
            if parity == 0:
                e = e - e.body  # keep the body on the diagonal only
            frame.entries[i][j] = e * scale
    return frame
