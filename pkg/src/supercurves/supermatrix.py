"""Supermatrix algebra over a finite Grassmann algebra.

A matrix with (k|l) x (p|q) block parity structure: indices up to k (resp. p)
are the even class.  The matrix is *even* when entry (i, j) is homogeneous of
parity parity(i)+parity(j) mod 2.  For square even matrices this module
provides the Berezinian ber and its reciprocal ber*, Gelfand-Retakh
quasideterminants, exact inversion, and the generalized Cramer's rule solving
x A = y with Berezinian ratios (ber for even slots, ber* for odd slots),
together with a brute-force oracle that expands everything over the 2^n
monomial basis of the coefficient algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import DimensionError, NotInvertibleError, ParityError
from .grassmann import GrassmannScalar, sign_of_merge

Shape = Tuple[int, int]

_BODY_TOL = 1e-10


class SuperMatrix:
    """Rectangular matrix over Lambda with block parity bookkeeping."""

    __slots__ = ("row_shape", "col_shape", "n", "entries")

    def __init__(self, row_shape: Shape, col_shape: Shape, entries: Sequence[Sequence[GrassmannScalar]]):
        k, l = row_shape
        p, q = col_shape
        if min(k, l, p, q) < 0:
            raise DimensionError("negative block size")
        rows = k + l
        cols = p + q
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise DimensionError(f"entry grid is not {rows}x{cols}")
        ns = {e.n for row in entries for e in row}
        if len(ns) > 1:
            raise DimensionError("entries live over different Grassmann algebras")
        self.row_shape = (k, l)
        self.col_shape = (p, q)
        self.n = ns.pop() if ns else 0
        self.entries = [list(row) for row in entries]

    # -- constructors --------------------------------------------------------
    @classmethod
    def identity(cls, shape: Shape, n: int) -> "SuperMatrix":
        m = shape[0] + shape[1]
        ent = [[GrassmannScalar.one(n) if i == j else GrassmannScalar.zero(n) for j in range(m)]
               for i in range(m)]
        return cls(shape, shape, ent)

    @classmethod
    def zero(cls, row_shape: Shape, col_shape: Shape, n: int) -> "SuperMatrix":
        rows = row_shape[0] + row_shape[1]
        cols = col_shape[0] + col_shape[1]
        ent = [[GrassmannScalar.zero(n) for _ in range(cols)] for _ in range(rows)]
        return cls(row_shape, col_shape, ent)

    # -- shape helpers -------------------------------------------------------
    @property
    def nrows(self) -> int:
        return self.row_shape[0] + self.row_shape[1]

    @property
    def ncols(self) -> int:
        return self.col_shape[0] + self.col_shape[1]

    def is_square(self) -> bool:
        return self.row_shape == self.col_shape

    def row_parity(self, i: int) -> int:
        return 0 if i < self.row_shape[0] else 1

    def col_parity(self, j: int) -> int:
        return 0 if j < self.col_shape[0] else 1

    def is_even(self) -> bool:
        """True when every entry is homogeneous of the parity its slot demands."""
        for i, row in enumerate(self.entries):
            rp = self.row_parity(i)
            for j, e in enumerate(row):
                want = (rp + self.col_parity(j)) & 1
                par = e.parity()
                if par is not None and par != want and e.terms:
                    return False
                if par is None:
                    return False
        return True

    def require_even(self) -> None:
        if not self.is_even():
            raise ParityError("matrix is not even for its block structure")

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        if self.row_shape != other.row_shape or self.col_shape != other.col_shape:
            raise DimensionError("shape mismatch in addition")
        ent = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        return SuperMatrix(self.row_shape, self.col_shape, ent)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + other.scale(-1.0)

    def scale(self, c) -> "SuperMatrix":
        ent = [[e * c for e in row] for row in self.entries]
        return SuperMatrix(self.row_shape, self.col_shape, ent)

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if self.col_shape != other.row_shape:
            raise DimensionError("inner shapes differ in product")
        return SuperMatrix(self.row_shape, other.col_shape,
                           _mat_mul(self.entries, other.entries, self.n))

    def row(self, i: int) -> List[GrassmannScalar]:
        return list(self.entries[i])

    def col(self, j: int) -> List[GrassmannScalar]:
        return [row[j] for row in self.entries]

    def with_row(self, i: int, new_row: Sequence[GrassmannScalar]) -> "SuperMatrix":
        ent = [list(r) for r in self.entries]
        ent[i] = list(new_row)
        return SuperMatrix(self.row_shape, self.col_shape, ent)

    def delete(self, i: int, j: int) -> "SuperMatrix":
        """Submatrix A^{ij} with the parity shapes adjusted for the dropped slots."""
        k, l = self.row_shape
        p, q = self.col_shape
        rshape = (k - 1, l) if i < k else (k, l - 1)
        cshape = (p - 1, q) if j < p else (p, q - 1)
        ent = [[e for jj, e in enumerate(row) if jj != j]
               for ii, row in enumerate(self.entries) if ii != i]
        return SuperMatrix(rshape, cshape, ent)

    def blocks(self):
        """(X, alpha, beta, Y) as plain entry grids."""
        k = self.row_shape[0]
        p = self.col_shape[0]
        X = [row[:p] for row in self.entries[:k]]
        alpha = [row[p:] for row in self.entries[:k]]
        beta = [row[:p] for row in self.entries[k:]]
        Y = [row[p:] for row in self.entries[k:]]
        return X, alpha, beta, Y

    def body(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                out[i, j] = e.body
        return out

    def max_coeff(self) -> float:
        return max((e.norm_inf() for row in self.entries for e in row), default=0.0)

    def isclose(self, other: "SuperMatrix", tol: float = 1e-9) -> bool:
        return (self - other).max_coeff() <= tol

    def __repr__(self):
        return (f"SuperMatrix({self.row_shape}x{self.col_shape} over n={self.n}:\n " +
                "\n ".join(str([str(e) for e in row]) for row in self.entries) + ")")

    # -- io --------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"rows": list(self.row_shape), "cols": list(self.col_shape),
                "entries": [[e.to_json() for e in row] for row in self.entries]}

    @classmethod
    def from_json(cls, data) -> "SuperMatrix":
        rows = tuple(int(x) for x in data["rows"])
        cols = tuple(int(x) for x in data["cols"])
        ent = [[GrassmannScalar.from_json(e) for e in row] for row in data["entries"]]
        return cls(rows, cols, ent)


# -- raw grid helpers ----------------------------------------------------------

def _zeros(rows: int, cols: int, n: int) -> List[List[GrassmannScalar]]:
    return [[GrassmannScalar.zero(n) for _ in range(cols)] for _ in range(rows)]


def _mat_mul(A, B, n: int):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    if A and len(A[0]) != inner:
        raise DimensionError("inner dimension mismatch")
    out = _zeros(rows, cols, n)
    for i in range(rows):
        Ai = A[i]
        Oi = out[i]
        for r in range(inner):
            a = Ai[r]
            if not a.terms:
                continue
            Br = B[r]
            for j in range(cols):
                b = Br[j]
                if b.terms:
                    Oi[j] = Oi[j] + a * b
    return out


def _scalar_mat_mul(C: np.ndarray, G, n: int):
    """Complex matrix times Grassmann grid (complex scalars are central)."""
    rows, inner = C.shape
    cols = len(G[0]) if G else 0
    out = _zeros(rows, cols, n)
    for i in range(rows):
        Oi = out[i]
        for r in range(inner):
            c = C[i, r]
            if c == 0:
                continue
            Gr = G[r]
            for j in range(cols):
                g = Gr[j]
                if g.terms:
                    Oi[j] = Oi[j] + g * c
    return out


def _mat_scalar_mul(G, C: np.ndarray, n: int):
    """Grassmann grid times complex matrix."""
    rows = len(G)
    inner, cols = C.shape
    out = _zeros(rows, cols, n)
    for i in range(rows):
        Gi = G[i]
        Oi = out[i]
        for r in range(inner):
            g = Gi[r]
            if not g.terms:
                continue
            for j in range(cols):
                c = C[r, j]
                if c != 0:
                    Oi[j] = Oi[j] + g * c
    return out


def _grid_body(G) -> np.ndarray:
    rows = len(G)
    cols = len(G[0]) if rows else 0
    out = np.zeros((rows, cols), dtype=complex)
    for i, row in enumerate(G):
        for j, e in enumerate(row):
            out[i, j] = e.body
    return out


def _grid_soul(G):
    return [[e.soul() for e in row] for row in G]


def _grid_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _require_even_entries(M) -> None:
    for row in M:
        for e in row:
            if e.terms and e.parity() != 0:
                raise ParityError("entry of a commutative determinant is not even")


# -- determinants over the even (commutative) subring ---------------------------

def det_even_laplace(M, n: int) -> GrassmannScalar:
    """Leibniz/Laplace expansion, memoized over column subsets.

    Valid because even elements commute; used as the fallback and as the
    independent check for the exp-tr-log fast path.
    """
    m = len(M)
    if m == 0:
        return GrassmannScalar.one(n)
    _require_even_entries(M)
    full = (1 << m) - 1
    memo = {0: GrassmannScalar.one(n)}

    def rec(colmask: int) -> GrassmannScalar:
        cached = memo.get(colmask)
        if cached is not None:
            return cached
        row = m - colmask.bit_count()  # rows consumed in order
        acc = GrassmannScalar.zero(n)
        pos = 0
        for j in range(m):
            bit = 1 << j
            if not colmask & bit:
                continue
            e = M[row][j]
            if e.terms:
                term = e * rec(colmask ^ bit)
                acc = acc + (term if pos % 2 == 0 else -term)
            pos += 1
        memo[colmask] = acc
        return acc

    return rec(full)


def det_even(M, n: int | None = None) -> GrassmannScalar:
    """Determinant of a square matrix of even elements of Lambda.

    Uses det(body) * exp(tr log(I + body^-1 soul)) when the body is
    invertible (the series terminates by nilpotency), Laplace expansion
    otherwise.  The two routes agree identically.
    """
    if isinstance(M, SuperMatrix):
        n = M.n
        M = M.entries
    if n is None:
        raise DimensionError("generator count required for raw grids")
    m = len(M)
    if m == 0:
        return GrassmannScalar.one(n)
    if any(len(r) != m for r in M):
        raise DimensionError("determinant of a non-square matrix")
    _require_even_entries(M)
    body = _grid_body(M)
    det_body = complex(np.linalg.det(body)) if m else 1.0 + 0j
    scale = max(1.0, float(np.abs(body).max(initial=0.0)))
    if abs(det_body) <= (_BODY_TOL * scale) ** m:
        return det_even_laplace(M, n)
    N = _scalar_mat_mul(np.linalg.inv(body), _grid_soul(M), n)
    # tr(N^r) until the power dies; even souls have degree >= 2 so this is short
    logdet = GrassmannScalar.zero(n)
    power = N
    r = 1
    while True:
        tr = GrassmannScalar.zero(n)
        for i in range(m):
            tr = tr + power[i][i]
        if tr.terms:
            logdet = logdet + tr * ((-1.0) ** (r + 1) / r)
        if all(not e.terms for row in power for e in row):
            break
        r += 1
        if r > max(1, n):
            break
        power = _mat_mul(power, N, n)
    return logdet.exp() * det_body


def invert_even(M, n: int):
    """Inverse of a square matrix of even elements with invertible body."""
    m = len(M)
    body = _grid_body(M)
    try:
        binv = np.linalg.inv(body)
    except np.linalg.LinAlgError as exc:
        raise NotInvertibleError("reduced matrix is singular") from exc
    if not np.all(np.isfinite(binv)):
        raise NotInvertibleError("reduced matrix is singular")
    N = _scalar_mat_mul(binv, _grid_soul(M), n)
    acc = [[GrassmannScalar.one(n) if i == j else GrassmannScalar.zero(n) for j in range(m)]
           for i in range(m)]
    power = N
    sign = -1.0
    while any(e.terms for row in power for e in row):
        acc = [[a + p * sign for a, p in zip(ra, rp)] for ra, rp in zip(acc, power)]
        power = _mat_mul(power, N, n)
        sign = -sign
    return _mat_scalar_mul(acc, binv, n)


# -- Berezinians ----------------------------------------------------------------

def berezinian(A: SuperMatrix) -> GrassmannScalar:
    """ber(A) = det(X - alpha Y^-1 beta) det(Y)^-1 for square even A."""
    if not A.is_square():
        raise DimensionError("Berezinian of a non-square supermatrix")
    A.require_even()
    k, l = A.row_shape
    X, alpha, beta, Y = A.blocks()
    n = A.n
    if k and abs(np.linalg.det(_grid_body(X))) < _BODY_TOL ** k:
        raise NotInvertibleError("reduced even-even block is singular")
    if l and abs(np.linalg.det(_grid_body(Y))) < _BODY_TOL ** l:
        raise NotInvertibleError("reduced odd-odd block is singular")
    if l == 0:
        return det_even(X, n)
    if k == 0:
        return det_even(Y, n).invert()
    Yinv = invert_even(Y, n)
    schur = _grid_sub(X, _mat_mul(_mat_mul(alpha, Yinv, n), beta, n))
    return det_even(schur, n) * det_even(Y, n).invert()


def berezinian_star(A: SuperMatrix) -> GrassmannScalar:
    """ber*(A) = det(X)^-1 det(Y - beta X^-1 alpha); equals ber(A)^-1."""
    if not A.is_square():
        raise DimensionError("Berezinian of a non-square supermatrix")
    A.require_even()
    k, l = A.row_shape
    X, alpha, beta, Y = A.blocks()
    n = A.n
    if k and abs(np.linalg.det(_grid_body(X))) < _BODY_TOL ** k:
        raise NotInvertibleError("reduced even-even block is singular")
    if l and abs(np.linalg.det(_grid_body(Y))) < _BODY_TOL ** l:
        raise NotInvertibleError("reduced odd-odd block is singular")
    if k == 0:
        return det_even(Y, n)
    if l == 0:
        return det_even(X, n).invert()
    Xinv = invert_even(X, n)
    schur = _grid_sub(Y, _mat_mul(_mat_mul(beta, Xinv, n), alpha, n))
    return det_even(X, n).invert() * det_even(schur, n)


def invert_matrix(A: SuperMatrix) -> SuperMatrix:
    """Exact inverse of a square matrix with invertible body (Neumann series)."""
    if not A.is_square():
        raise DimensionError("inverse of a non-square supermatrix")
    m = A.nrows
    n = A.n
    body = A.body()
    try:
        binv = np.linalg.inv(body)
    except np.linalg.LinAlgError as exc:
        raise NotInvertibleError("matrix body is singular") from exc
    if not np.all(np.isfinite(binv)):
        raise NotInvertibleError("matrix body is singular")
    S = _grid_soul(A.entries)
    N = _scalar_mat_mul(binv, S, n)
    acc = [[GrassmannScalar.one(n) if i == j else GrassmannScalar.zero(n) for j in range(m)]
           for i in range(m)]
    power = N
    sign = -1.0
    while any(e.terms for row in power for e in row):
        acc = [[a + p * sign for a, p in zip(ra, rp)] for ra, rp in zip(acc, power)]
        power = _mat_mul(power, N, n)
        sign = -sign
    ent = _mat_scalar_mul(acc, binv, n)
    return SuperMatrix(A.row_shape, A.col_shape, ent)


# -- quasideterminants -----------------------------------------------------------

def _same_class(A: SuperMatrix, i: int, j: int) -> bool:
    return (i < A.row_shape[0]) == (j < A.col_shape[0])


def quasideterminant(A: SuperMatrix, i: int, j: int) -> GrassmannScalar:
    """|A|_{ij} = a_ij - sum_{p!=j, q!=i} a_ip c^{(ij)}_{pq} a_qj, C = (A^{ij})^-1.

    Indices are 0-based; i and j must sit in the same parity class so that
    A^{ij} stays even.
    """
    if not A.is_square():
        raise DimensionError("quasideterminant of a non-square matrix")
    if not _same_class(A, i, j):
        raise ParityError("row and column index lie in different parity classes")
    m = A.nrows
    if m == 1:
        return A.entries[0][0]
    C = invert_matrix(A.delete(i, j))
    acc = A.entries[i][j]
    for p in range(m):
        if p == j:
            continue
        a_ip = A.entries[i][p]
        if not a_ip.terms:
            continue
        pp = p - (p > j)
        for q in range(m):
            if q == i:
                continue
            a_qj = A.entries[q][j]
            if not a_qj.terms:
                continue
            qq = q - (q > i)
            c = C.entries[pp][qq]
            if c.terms:
                acc = acc - a_ip * c * a_qj
    return acc


def quasidet_substituted(A: SuperMatrix, i: int, j: int, y: Sequence[GrassmannScalar]) -> GrassmannScalar:
    """|A_i(y)|_{ij} where row i of A has been replaced by the vector y."""
    if not A.is_square():
        raise DimensionError("quasideterminant of a non-square matrix")
    if not _same_class(A, i, j):
        raise ParityError("row and column index lie in different parity classes")
    m = A.nrows
    if len(y) != m:
        raise DimensionError("substituted row has wrong length")
    if m == 1:
        return y[0]
    C = invert_matrix(A.delete(i, j))
    acc = y[j]
    for p in range(m):
        if p == j:
            continue
        y_p = y[p]
        if not y_p.terms:
            continue
        pp = p - (p > j)
        for q in range(m):
            if q == i:
                continue
            a_qj = A.entries[q][j]
            if not a_qj.terms:
                continue
            qq = q - (q > i)
            c = C.entries[pp][qq]
            if c.terms:
                acc = acc - y_p * c * a_qj
    return acc


def _candidate_columns(A: SuperMatrix, i: int):
    k = A.row_shape[0]
    p = A.col_shape[0]
    if i < k:
        return range(p)
    return range(p, A.ncols)


def ber_substituted(A: SuperMatrix, i: int, y: Sequence[GrassmannScalar],
                    j: int | None = None) -> GrassmannScalar:
    """ber(A_i(y)) for i in the even class, by linear substitution of y into row i.

    Row i occurs only linearly in ber(A), so the substitution is well defined
    even when A_i(y) is not an even matrix; it is evaluated through
    (-1)^{i+j} |A_i(y)|_{ij} ber(A^{ij}), which is independent of the admissible
    column j.
    """
    if i >= A.row_shape[0]:
        raise ParityError("ber substitution requires an even-class row")
    return _substituted(A, i, y, j, star=False)


def ber_star_substituted(A: SuperMatrix, i: int, y: Sequence[GrassmannScalar],
                         j: int | None = None) -> GrassmannScalar:
    """ber*(A_i(y)) for i in the odd class (the odd-slot analog)."""
    if i < A.row_shape[0]:
        raise ParityError("ber* substitution requires an odd-class row")
    return _substituted(A, i, y, j, star=True)


def _substituted(A, i, y, j, star: bool):
    return substitution_functional(A, i, j=j, star=star)(y)


def substitution_functional(A: SuperMatrix, i: int, j: int | None = None, star: bool = False):
    """Closure computing ber(A_i(y)) (or ber*) for arbitrary rows y.

    The inverse of A^{ij} and the minor Berezinian are cached, so sweeping many
    substituted rows (as the Baker-vector formulas do) costs one inversion.
    """
    fn = berezinian_star if star else berezinian
    m = A.nrows
    last_error: Exception | None = None
    columns = [j] if j is not None else list(_candidate_columns(A, i))
    for col in columns:
        if not _same_class(A, i, col):
            raise ParityError("substitution column in the wrong parity class")
        try:
            minor = fn(A.delete(i, col))
            C = invert_matrix(A.delete(i, col))
        except NotInvertibleError as exc:
            last_error = exc
            continue
        sign = -1.0 if (i + col) & 1 else 1.0
        signed_minor = minor * sign
        # premultiply C a_qj once: row of correction factors indexed by p != col
        corr = []
        for p in range(m):
            if p == col:
                corr.append(None)
                continue
            pp = p - (p > col)
            acc = GrassmannScalar.zero(A.n)
            for q in range(m):
                if q == i:
                    continue
                a_qj = A.entries[q][col]
                if not a_qj.terms:
                    continue
                qq = q - (q > i)
                c = C.entries[pp][qq]
                if c.terms:
                    acc = acc + c * a_qj
            corr.append(acc)

        def evaluate(y, _corr=corr, _col=col, _signed_minor=signed_minor):
            if len(y) != m:
                raise DimensionError("substituted row has wrong length")
            acc = y[_col]
            for p, factor in enumerate(_corr):
                if factor is None or not factor.terms:
                    continue
                if y[p].terms:
                    acc = acc - y[p] * factor
            return acc * _signed_minor

        return evaluate
    raise NotInvertibleError("no admissible column for the substituted Berezinian") \
        from last_error


# -- linear systems ----------------------------------------------------------------

@dataclass
class SuperLinearSystem:
    """x A = y with A square and even; y may mix parities."""

    matrix: SuperMatrix
    rhs: List[GrassmannScalar]

    def __post_init__(self):
        if not self.matrix.is_square():
            raise DimensionError("system matrix must be square")
        if len(self.rhs) != self.matrix.nrows:
            raise DimensionError("right-hand side has wrong length")


def solve_cramer(system: SuperLinearSystem) -> List[GrassmannScalar]:
    """Solve x A = y via x_i = ber(A_i(y))/ber(A) (ber* in the odd slots)."""
    A = system.matrix
    A.require_even()
    y = system.rhs
    k = A.row_shape[0]
    ber_A = berezinian(A)
    ber_A_inv = ber_A.invert()
    ber_star_A_inv = ber_A  # ber* = 1/ber
    out = []
    for i in range(A.nrows):
        if i < k:
            out.append(ber_substituted(A, i, y) * ber_A_inv)
        else:
            out.append(ber_star_substituted(A, i, y) * ber_star_A_inv)
    return out


def solve_via_inverse(system: SuperLinearSystem) -> List[GrassmannScalar]:
    """x = y A^-1, the direct route used to cross-check Cramer."""
    Ainv = invert_matrix(system.matrix)
    y = system.rhs
    m = len(y)
    n = system.matrix.n
    out = []
    for j in range(m):
        acc = GrassmannScalar.zero(n)
        for i in range(m):
            e = Ainv.entries[i][j]
            if e.terms and y[i].terms:
                acc = acc + y[i] * e
        out.append(acc)
    return out


# -- the C-expansion oracle ---------------------------------------------------------

def right_mult_operator(a: GrassmannScalar) -> np.ndarray:
    """Matrix of x -> x*a on the 2^n monomial basis (column index = mask of x)."""
    dim = 1 << a.n
    M = np.zeros((dim, dim), dtype=complex)
    for t, v in a.terms.items():
        for s in range(dim):
            if s & t:
                continue
            M[s | t, s] += sign_of_merge(s, t) * v
    return M


def left_mult_operator(a: GrassmannScalar) -> np.ndarray:
    """Matrix of x -> a*x on the 2^n monomial basis."""
    dim = 1 << a.n
    M = np.zeros((dim, dim), dtype=complex)
    for t, v in a.terms.items():
        for s in range(dim):
            if s & t:
                continue
            M[s | t, s] += sign_of_merge(t, s) * v
    return M


def expand_vector(vs: Sequence[GrassmannScalar], n: int) -> np.ndarray:
    dim = 1 << n
    out = np.zeros(len(vs) * dim, dtype=complex)
    for i, v in enumerate(vs):
        for m, c in v.terms.items():
            out[i * dim + m] = c
    return out


def assemble_vector(flat: np.ndarray, count: int, n: int) -> List[GrassmannScalar]:
    dim = 1 << n
    out = []
    for i in range(count):
        terms = {}
        for m in range(dim):
            c = flat[i * dim + m]
            if abs(c) > 1e-12:
                terms[m] = complex(c)
        out.append(GrassmannScalar(n, terms))
    return out


def oracle_solve(system: SuperLinearSystem) -> List[GrassmannScalar]:
    """Expand x A = y into one large complex linear system and solve it.

    Independent of the Berezinian machinery: each Lambda entry becomes a
    2^n x 2^n right-multiplication block and the flat system is solved by
    standard elimination.
    """
    A = system.matrix
    m = A.nrows
    n = A.n
    dim = 1 << n
    big = np.zeros((m * dim, m * dim), dtype=complex)
    for i in range(m):
        for j in range(m):
            a = A.entries[i][j]
            if a.terms:
                big[j * dim:(j + 1) * dim, i * dim:(i + 1) * dim] = right_mult_operator(a)
    rhs = expand_vector(system.rhs, n)
    try:
        flat = np.linalg.solve(big, rhs)
    except np.linalg.LinAlgError:
        flat, *_ = np.linalg.lstsq(big, rhs, rcond=None)
        residual = float(np.linalg.norm(big @ flat - rhs))
        if residual > 1e-8 * max(1.0, float(np.linalg.norm(rhs))):
            raise NotInvertibleError("expanded system is singular or inconsistent")
    return assemble_vector(flat, m, n)


def apply_row_vector(x: Sequence[GrassmannScalar], A: SuperMatrix) -> List[GrassmannScalar]:
    """(x A)_j = sum_i x_i a_ij, keeping the left/right order."""
    m = A.nrows
    n = A.n
    out = []
    for j in range(A.ncols):
        acc = GrassmannScalar.zero(n)
        for i in range(m):
            a = A.entries[i][j]
            if a.terms and x[i].terms:
                acc = acc + x[i] * a
        out.append(acc)
    return out


# -- random generation (tests and the acceptance sweep) ------------------------------

def random_even_matrix(rng, shape: Shape, n: int, soul_scale: float = 0.6,
                       min_sv: float = 0.35) -> SuperMatrix:
    """Random even supermatrix whose diagonal body blocks are well conditioned."""
    from .grassmann import random_element

    k, l = shape
    m = k + l

    def block_body(size):
        while True:
            B = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
            if size == 0 or np.linalg.svd(B, compute_uv=False).min() > min_sv:
                return B

    Xb = block_body(k)
    Yb = block_body(l)
    ent = []
    for i in range(m):
        row = []
        for j in range(m):
            want = (int(i >= k) + int(j >= k)) & 1
            e = random_element(rng, n, parity=want, scale=soul_scale)
            e = GrassmannScalar(n, {mask: c for mask, c in e.terms.items() if mask})
            if want == 0:
                if i < k and j < k:
                    e = e + GrassmannScalar.scalar(n, complex(Xb[i, j]))
                elif i >= k and j >= k:
                    e = e + GrassmannScalar.scalar(n, complex(Yb[i - k, j - k]))
            row.append(e)
        ent.append(row)
    return SuperMatrix(shape, shape, ent)


def random_vector(rng, m: int, n: int, scale: float = 1.0) -> List[GrassmannScalar]:
    from .grassmann import random_element

    return [random_element(rng, n, parity=None, scale=scale) for _ in range(m)]
