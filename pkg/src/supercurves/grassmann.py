"""Exact arithmetic in the finite Grassmann algebra Lambda = C[beta_1..beta_n].

Elements are stored sparsely as a map ``mask -> complex`` where ``mask`` is a
bitmask over the n odd generators and the monomial is the ascending product of
the selected generators.  All structural operations (products, inverses of
elements with invertible body, exponentials of nilpotents) are exact in the
monomial structure; only the complex coefficients are floating point.

The number of generators is configuration (the underlying theory never fixes
it) and is capped at 16 so that dense expansions over the 2^n monomial basis
stay tractable.
"""

from __future__ import annotations

from typing import Dict, Iterable, Mapping, Union

from .errors import DimensionError, NotInvertibleError, ParityError

MAX_GENERATORS = 16

Scalar = Union[int, float, complex]

# sign tables (mask_a << n) | mask_b -> +-1, built lazily per generator count
_SIGN_TABLES: Dict[int, list] = {}


def _build_sign_table(n: int) -> list:
    size = 1 << n
    table = [0] * (size * size)
    for a in range(size):
        base = a << n
        for b in range(size):
            if a & b:
                continue  # annihilates; sign never read
            inv = 0
            bb = b
            while bb:
                low = bb & -bb
                inv += (a >> low.bit_length()).bit_count()
                bb ^= low
            table[base | b] = -1 if inv & 1 else 1
    return table


def sign_of_merge(mask_a: int, mask_b: int) -> int:
    """(-1)^inversions when interleaving two disjoint ascending monomials."""
    inv = 0
    bb = mask_b
    while bb:
        low = bb & -bb
        inv += (mask_a >> low.bit_length()).bit_count()
        bb ^= low
    return -1 if inv & 1 else 1


def _sign_table(n: int) -> list:
    table = _SIGN_TABLES.get(n)
    if table is None and n <= 8:
        table = _SIGN_TABLES[n] = _build_sign_table(n)
    return table


class GrassmannScalar:
    """An element of Lambda with exact sparse monomial arithmetic."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, complex] | None = None):
        if not 0 <= n <= MAX_GENERATORS:
            raise DimensionError(f"generator count {n} outside [0, {MAX_GENERATORS}]")
        self.n = n
        clean: Dict[int, complex] = {}
        if terms:
            limit = 1 << n
            for mask, c in terms.items():
                if not 0 <= mask < limit:
                    raise DimensionError(f"mask {mask:#x} references generators >= {n}")
                c = complex(c)
                if c != 0:
                    clean[mask] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def scalar(cls, n: int, value: Scalar) -> "GrassmannScalar":
        return cls(n, {0: complex(value)})

    @classmethod
    def generator(cls, n: int, i: int) -> "GrassmannScalar":
        if not 0 <= i < n:
            raise DimensionError(f"generator index {i} out of range for n={n}")
        return cls(n, {1 << i: 1.0 + 0j})

    @classmethod
    def monomial(cls, n: int, indices: Iterable[int], coeff: Scalar = 1.0) -> "GrassmannScalar":
        mask = 0
        for i in indices:
            bit = 1 << i
            if mask & bit:
                return cls(n)  # repeated generator annihilates
            mask |= bit
        return cls(n, {mask: complex(coeff)})

    @classmethod
    def zero(cls, n: int) -> "GrassmannScalar":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "GrassmannScalar":
        return cls(n, {0: 1.0 + 0j})

    # -- structure ----------------------------------------------------------
    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return not self.terms
        return all(abs(c) <= tol for c in self.terms.values())

    @property
    def body(self) -> complex:
        return self.terms.get(0, 0j)

    def soul(self) -> "GrassmannScalar":
        return GrassmannScalar(self.n, {m: c for m, c in self.terms.items() if m})

    def reduce(self) -> complex:
        """Quotient out the nilpotents: the coefficient of the empty monomial."""
        return self.terms.get(0, 0j)

    def parity(self) -> int | None:
        """0 (even), 1 (odd) for homogeneous elements, None for mixed, 0 for zero."""
        par = None
        for mask in self.terms:
            p = mask.bit_count() & 1
            if par is None:
                par = p
            elif par != p:
                return None
        return 0 if par is None else par

    def is_even(self) -> bool:
        return self.parity() == 0

    def is_odd(self) -> bool:
        p = self.parity()
        return p == 1 or (p == 0 and not self.terms)

    def is_homogeneous(self) -> bool:
        return self.parity() is not None

    def degree(self) -> int:
        """Largest monomial length with a stored coefficient (0 for body-only)."""
        return max((m.bit_count() for m in self.terms), default=0)

    def norm_inf(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def chop(self, tol: float = 1e-14) -> "GrassmannScalar":
        return GrassmannScalar(self.n, {m: c for m, c in self.terms.items() if abs(c) > tol})

    # -- ring operations ----------------------------------------------------
    def _check_same_algebra(self, other: "GrassmannScalar") -> None:
        if self.n != other.n:
            raise DimensionError(f"mixed generator counts {self.n} and {other.n}")

    def embed(self, n: int) -> "GrassmannScalar":
        """The canonical embedding into the algebra with n >= self.n generators."""
        if n < self.n:
            raise DimensionError("cannot embed into a smaller algebra")
        return self if n == self.n else GrassmannScalar(n, self.terms)

    def __add__(self, other):
        if isinstance(other, GrassmannScalar):
            self._check_same_algebra(other)
            out = dict(self.terms)
            for m, c in other.terms.items():
                s = out.get(m, 0j) + c
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
            return GrassmannScalar(self.n, out)
        if isinstance(other, (int, float, complex)):
            return self + GrassmannScalar.scalar(self.n, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GrassmannScalar(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = GrassmannScalar.scalar(self.n, other)
        if isinstance(other, GrassmannScalar):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GrassmannScalar):
            self._check_same_algebra(other)
            n = self.n
            out: Dict[int, complex] = {}
            table = _sign_table(n)
            if table is not None:
                shift = n
                for sa, ca in self.terms.items():
                    base = sa << shift
                    for sb, cb in other.terms.items():
                        if sa & sb:
                            continue
                        k = sa | sb
                        v = out.get(k, 0j) + table[base | sb] * ca * cb
                        if v == 0:
                            out.pop(k, None)
                        else:
                            out[k] = v
            else:
                for sa, ca in self.terms.items():
                    for sb, cb in other.terms.items():
                        if sa & sb:
                            continue
                        k = sa | sb
                        v = out.get(k, 0j) + sign_of_merge(sa, sb) * ca * cb
                        if v == 0:
                            out.pop(k, None)
                        else:
                            out[k] = v
            return GrassmannScalar(n, out)
        if isinstance(other, (int, float, complex)):
            c = complex(other)
            if c == 0:
                return GrassmannScalar(self.n)
            return GrassmannScalar(self.n, {m: v * c for m, v in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        # complex scalars are central, so this is safe
        if isinstance(other, (int, float, complex)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * (1.0 / complex(other))
        if isinstance(other, GrassmannScalar):
            return self * other.invert()
        return NotImplemented

    def invert(self) -> "GrassmannScalar":
        """Exact inverse via the terminating Neumann series body^-1 sum (-soul/body)^m."""
        b = self.body
        if b == 0:
            raise NotInvertibleError("element has zero body")
        u = self.soul() * (-1.0 / b)  # -soul/body, nilpotent
        acc = GrassmannScalar.one(self.n)
        power = GrassmannScalar.one(self.n)
        for _ in range(self.n):
            power = power * u
            if not power.terms:
                break
            acc = acc + power
        return acc * (1.0 / b)

    def exp(self) -> "GrassmannScalar":
        """exp(body) times the terminating Taylor series of the nilpotent part."""
        import cmath

        s = self.soul()
        acc = GrassmannScalar.one(self.n)
        power = GrassmannScalar.one(self.n)
        fact = 1.0
        for m in range(1, self.n + 1):
            power = power * s
            if not power.terms:
                break
            fact *= m
            acc = acc + power * (1.0 / fact)
        return acc * cmath.exp(self.body)

    def conjugate(self, structure: "RealStructure") -> "GrassmannScalar":
        """Apply the real structure: antilinear, fixes generators, reverses products."""
        eps = structure.epsilon
        out = {}
        for mask, c in self.terms.items():
            m = mask.bit_count()
            flips = (m * (m - 1)) // 2
            sgn = 1.0
            if flips & 1:
                sgn = -eps  # reversal sign times epsilon^flips collapses to (-eps)^flips
            out[mask] = sgn * c.conjugate()
        return GrassmannScalar(self.n, out)

    def substitute(self, images: Mapping[int, "GrassmannScalar"]) -> "GrassmannScalar":
        """Algebra endomorphism sending generator i to images[i] (odd), fixing the rest."""
        for i, im in images.items():
            if not 0 <= i < self.n:
                raise DimensionError(f"generator index {i} out of range")
            if not im.is_odd():
                raise ParityError("substitution images must be odd elements")
        out = GrassmannScalar.zero(self.n)
        for mask, c in self.terms.items():
            factor = GrassmannScalar.scalar(self.n, c)
            m = mask
            while m:
                low = m & -m
                i = low.bit_length() - 1
                g = images.get(i)
                if g is None:
                    g = GrassmannScalar.generator(self.n, i)
                factor = factor * g
                if not factor.terms:
                    break
                m ^= low
            out = out + factor
        return out

    # -- comparisons / hashing ---------------------------------------------
    def isclose(self, other: "GrassmannScalar", tol: float = 1e-9) -> bool:
        self._check_same_algebra(other)
        return (self - other).norm_inf() <= tol

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = GrassmannScalar.scalar(self.n, other)
        if not isinstance(other, GrassmannScalar):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    # -- io ------------------------------------------------------------------
    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mask in sorted(self.terms, key=lambda m: (m.bit_count(), m)):
            c = self.terms[mask]
            if mask == 0:
                parts.append(f"{c:.6g}")
            else:
                gens = "".join(f"b{i + 1}" for i in range(self.n) if mask >> i & 1)
                parts.append(f"({c:.6g})*{gens}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        terms = []
        for mask in sorted(self.terms):
            c = self.terms[mask]
            idx = [i + 1 for i in range(self.n) if mask >> i & 1]
            terms.append({"mask": idx, "re": c.real, "im": c.imag})
        return {"n": self.n, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "GrassmannScalar":
        n = int(data["n"])
        terms: Dict[int, complex] = {}
        for t in data.get("terms", []):
            mask = 0
            for i in t.get("mask", []):
                mask |= 1 << (int(i) - 1)
            terms[mask] = terms.get(mask, 0j) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        return cls(n, terms)


class RealStructure:
    """A real structure omega on Lambda, parametrized by the sign epsilon."""

    __slots__ = ("epsilon",)

    def __init__(self, epsilon: int = 1):
        if epsilon not in (1, -1):
            raise DimensionError("epsilon must be +1 or -1")
        self.epsilon = epsilon

    def __repr__(self):
        return f"RealStructure(epsilon={self.epsilon:+d})"


def as_grassmann(value: Union[Scalar, GrassmannScalar], n: int) -> GrassmannScalar:
    """Coerce a plain number into Lambda (identity on GrassmannScalar of matching n)."""
    if isinstance(value, GrassmannScalar):
        if value.n != n:
            raise DimensionError(f"element lives over n={value.n}, expected {n}")
        return value
    return GrassmannScalar.scalar(n, value)


def grassmann_sum(values: Iterable[GrassmannScalar], n: int) -> GrassmannScalar:
    acc = GrassmannScalar.zero(n)
    for v in values:
        acc = acc + v
    return acc


def random_element(rng, n: int, parity: int | None = None, scale: float = 1.0,
                   body: complex | None = None) -> GrassmannScalar:
    """Random element with independent complex gaussian coefficients.

    parity None gives a mixed element; 0/1 restrict to the even/odd part.
    A nonzero ``body`` overrides the empty-monomial coefficient.
    """
    terms: Dict[int, complex] = {}
    for mask in range(1 << n):
        if parity is not None and (mask.bit_count() & 1) != parity:
            continue
        c = complex(rng.standard_normal(), rng.standard_normal()) * scale
        terms[mask] = c
    if body is not None:
        terms[0] = complex(body)
    return GrassmannScalar(n, terms)
