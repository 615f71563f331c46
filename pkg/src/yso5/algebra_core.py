"""Exact Gaussian-rational scalars and matrices.

Every value handled by the package lives in Q(i): a pair of
:class:`fractions.Fraction` objects.  Matrices store a single positive
integer denominator together with integer numerator arrays for the real
and imaginary parts.  When all numerators fit comfortably in 64-bit
integers the arrays are ``scipy.sparse`` CSR arrays; otherwise the data
falls back to a dictionary of Python integers, so arithmetic is exact in
either case.
"""
from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy import sparse

__all__ = [
    "Scalar",
    "Matrix",
    "SparseOp",
    "Sqrt2Scaled",
    "DimensionError",
    "mat_mul",
    "kron",
    "commutator",
    "anticommutator",
    "as_scalar",
    "ZERO",
    "ONE",
    "I_UNIT",
    "MAX_DENSE_DIM",
]

#: Largest dimension accepted by :class:`Matrix`; bigger operators must be
#: carried as :class:`SparseOp`.
MAX_DENSE_DIM = 1024

# Numerators above this bound are not trusted to int64 arithmetic.
_LIMIT = 2**62


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

_SCALAR_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)"
    r"(?:\s*(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)\s*i)?\s*$"
)
_IMAG_RE = re.compile(r"^\s*(?P<im>[+-]?\d+(?:/\d+)?)?\s*i\s*$")


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class Scalar:
    """Exact element of Q(i).

    Parameters
    ----------
    re, im : int, Fraction or str
        Real and imaginary parts.  Floats are rejected on purpose.

    Examples
    --------
    >>> Scalar(1, 2) * Scalar(0, 1)
    Scalar('-2/1')
    >>> str(Scalar(Fraction(1, 2), Fraction(-3, 4)))
    '1/2-3/4 i'
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "_re", _frac(re))
        object.__setattr__(self, "_im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    # construction ---------------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``"p/q"``, ``"p/q+r/s i"``, ``"r/s i"`` or a plain integer."""
        m = _SCALAR_RE.match(text)
        if m:
            im = Fraction(0)
            if m.group("im") is not None:
                im = Fraction(m.group("im"))
                if m.group("sign") == "-":
                    im = -im
            return cls(Fraction(m.group("re")), im)
        m = _IMAG_RE.match(text)
        if m:
            part = m.group("im")
            if part in (None, "+"):
                return cls(0, 1)
            if part == "-":
                return cls(0, -1)
            return cls(0, Fraction(part))
        raise ValueError(f"not a Gaussian rational: {text!r}")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self._re + other._re, self._im + other._im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self._re - other._re, self._im - other._im)

    def __rsub__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (_ExactArray, Sqrt2Scaled)):
            return other.__rmul__(self)
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self._re, self._im, other._re, other._im
        return Scalar(a * c - b * d, a * d + b * c)

    def __rmul__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other * self

    def __truediv__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return Scalar(-self._re, -self._im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(n)):
            out = out * base
        return out

    def inverse(self) -> "Scalar":
        norm = self._re * self._re + self._im * self._im
        if norm == 0:
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar(self._re / norm, -self._im / norm)

    def conjugate(self) -> "Scalar":
        return Scalar(self._re, -self._im)

    def norm2(self) -> Fraction:
        """Squared modulus."""
        return self._re * self._re + self._im * self._im

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        other = as_scalar(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self._re == other._re and self._im == other._im

    def __hash__(self):
        if self._im == 0:
            return hash(self._re)
        return hash((self._re, self._im))

    def __bool__(self):
        return bool(self._re) or bool(self._im)

    def is_real(self) -> bool:
        return self._im == 0

    def __complex__(self):
        return complex(float(self._re), float(self._im))

    # formatting -----------------------------------------------------------
    def __str__(self):
        out = f"{self._re.numerator}/{self._re.denominator}"
        if self._im:
            sign = "+" if self._im > 0 else "-"
            im = abs(self._im)
            out += f"{sign}{im.numerator}/{im.denominator} i"
        return out

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __reduce__(self):
        return (Scalar, (self._re, self._im))


def as_scalar(value, strict: bool = True):
    """Coerce ``value`` to :class:`Scalar`.

    With ``strict=False`` unsupported types give ``NotImplemented``
    instead of raising, which is what the operator overloads need.
    """
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (bool, int, Fraction, Rational)):
        return Scalar(value)
    if isinstance(value, str):
        return Scalar.parse(value)
    if strict:
        raise TypeError(f"cannot convert {type(value).__name__} to Scalar")
    return NotImplemented


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)


# ---------------------------------------------------------------------------
# integer storage helpers
# ---------------------------------------------------------------------------

def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _max_abs(arr) -> int:
    if arr.nnz == 0:
        return 0
    return int(np.abs(arr.data).max())


def _row_nnz(arr) -> int:
    if arr.nnz == 0:
        return 0
    return int(np.diff(arr.indptr).max())


def _empty(shape):
    return sparse.csr_array(shape, dtype=np.int64)


def _scale_int(arr, k: int):
    if k == 1:
        return arr
    return arr * np.int64(k)


class _Store:
    """Canonical numerator storage with a shared denominator.

    Exactly one of ``fast`` (a pair of int64 CSR arrays) and ``slow`` (a
    dict mapping ``(i, j)`` to ``(re, im)`` Python ints) is set.
    """

    __slots__ = ("shape", "den", "fast", "slow")

    def __init__(self, shape, den, fast=None, slow=None):
        self.shape = shape
        self.den = den
        self.fast = fast
        self.slow = slow

    # canonical constructors -----------------------------------------------
    @staticmethod
    def from_fast(shape, re, im, den: int) -> "_Store":
        re = sparse.csr_array(re, dtype=np.int64)
        im = sparse.csr_array(im, dtype=np.int64)
        re.eliminate_zeros()
        im.eliminate_zeros()
        if re.nnz == 0 and im.nnz == 0:
            return _Store(shape, 1, fast=(re, im))
        g = den
        for arr in (re, im):
            if arr.nnz and g != 1:
                g = math.gcd(g, int(np.gcd.reduce(np.abs(arr.data))))
        if g != 1:
            # g divides every numerator, so it is below the int64 bound
            re = re.copy()
            im = im.copy()
            re.data //= np.int64(g)
            im.data //= np.int64(g)
            den //= g
        re.sort_indices()
        im.sort_indices()
        return _Store(shape, den, fast=(re, im))

    @staticmethod
    def from_slow(shape, entries: dict, den: int) -> "_Store":
        entries = {k: v for k, v in entries.items() if v[0] or v[1]}
        if not entries:
            return _Store.from_fast(shape, _empty(shape), _empty(shape), 1)
        g = den
        for r, i in entries.values():
            g = math.gcd(g, math.gcd(r, i))
            if g == 1:
                break
        if g != 1:
            entries = {k: (r // g, i // g) for k, (r, i) in entries.items()}
            den //= g
        big = max(max(abs(r), abs(i)) for r, i in entries.values())
        if big < _LIMIT:
            return _Store._slow_to_fast(shape, entries, den)
        return _Store(shape, den, slow=entries)

    @staticmethod
    def _slow_to_fast(shape, entries, den):
        keys = sorted(entries)
        rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        re = np.fromiter((entries[k][0] for k in keys), dtype=np.int64, count=len(keys))
        im = np.fromiter((entries[k][1] for k in keys), dtype=np.int64, count=len(keys))
        re_arr = sparse.csr_array((re, (rows, cols)), shape=shape, dtype=np.int64)
        im_arr = sparse.csr_array((im, (rows, cols)), shape=shape, dtype=np.int64)
        return _Store.from_fast(shape, re_arr, im_arr, den)

    @staticmethod
    def from_scalars(shape, items) -> "_Store":
        items = [(k, as_scalar(v)) for k, v in items]
        items = [(k, v) for k, v in items if v]
        den = 1
        for _, v in items:
            den = _lcm(den, _lcm(v.re.denominator, v.im.denominator))
        entries = {}
        for (i, j), v in items:
            if not (0 <= i < shape[0] and 0 <= j < shape[1]):
                raise IndexError(f"entry {(i, j)} outside shape {shape}")
            r = v.re.numerator * (den // v.re.denominator)
            m = v.im.numerator * (den // v.im.denominator)
            old = entries.get((i, j), (0, 0))
            entries[(i, j)] = (old[0] + r, old[1] + m)
        return _Store.from_slow(shape, entries, den)

    # views ---------------------------------------------------------------
    def as_dict(self) -> dict:
        if self.slow is not None:
            return dict(self.slow)
        out = {}
        re, im = self.fast
        for arr, slot in ((re, 0), (im, 1)):
            coo = arr.tocoo()
            for i, j, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
                cur = out.get((i, j), [0, 0])
                if isinstance(cur, tuple):
                    cur = list(cur)
                cur[slot] += int(v)
                out[(i, j)] = cur
        return {k: (v[0], v[1]) for k, v in out.items()}

    def max_abs(self) -> int:
        if self.slow is not None:
            return max((max(abs(r), abs(i)) for r, i in self.slow.values()), default=0)
        return max(_max_abs(self.fast[0]), _max_abs(self.fast[1]))

    def nnz(self) -> int:
        if self.slow is not None:
            return len(self.slow)
        re, im = self.fast
        if im.nnz == 0:
            return re.nnz
        if re.nnz == 0:
            return im.nnz
        return (abs(re) + abs(im)).nnz

    def row_nnz(self) -> int:
        if self.slow is not None:
            counts = {}
            for i, _ in self.slow:
                counts[i] = counts.get(i, 0) + 1
            return max(counts.values(), default=0)
        return _row_nnz(self.fast[0]) + _row_nnz(self.fast[1])

    # arithmetic ----------------------------------------------------------
    def add(self, other: "_Store", sign: int = 1) -> "_Store":
        den = _lcm(self.den, other.den)
        fa, fb = den // self.den, den // other.den
        if (self.fast is not None and other.fast is not None and fa < _LIMIT and fb < _LIMIT
                and self.max_abs() * fa + other.max_abs() * fb < _LIMIT):
            ar, ai = self.fast
            br, bi = other.fast
            if sign < 0:
                br, bi = -br, -bi
            re = _scale_int(ar, fa) + _scale_int(br, fb)
            im = _scale_int(ai, fa) + _scale_int(bi, fb)
            return _Store.from_fast(self.shape, re, im, den)
        out = {k: (r * fa, i * fa) for k, (r, i) in self.as_dict().items()}
        for k, (r, i) in other.as_dict().items():
            cr, ci = out.get(k, (0, 0))
            out[k] = (cr + sign * r * fb, ci + sign * i * fb)
        return _Store.from_slow(self.shape, out, den)

    def scale(self, s: Scalar) -> "_Store":
        if not s:
            return _Store.from_fast(self.shape, _empty(self.shape), _empty(self.shape), 1)
        sd = _lcm(s.re.denominator, s.im.denominator)
        p = s.re.numerator * (sd // s.re.denominator)
        q = s.im.numerator * (sd // s.im.denominator)
        den = self.den * sd
        if self.fast is not None and self.max_abs() * (abs(p) + abs(q)) < _LIMIT:
            ar, ai = self.fast
            re = _scale_int(ar, p) - _scale_int(ai, q) if q else _scale_int(ar, p)
            im = _scale_int(ar, q) + _scale_int(ai, p) if q else _scale_int(ai, p)
            return _Store.from_fast(self.shape, re, im, den)
        out = {k: (r * p - i * q, r * q + i * p) for k, (r, i) in self.as_dict().items()}
        return _Store.from_slow(self.shape, out, den)

    def matmul(self, other: "_Store") -> "_Store":
        shape = (self.shape[0], other.shape[1])
        den = self.den * other.den
        k = min(self.shape[1], self.row_nnz() or 1)
        if (self.fast is not None and other.fast is not None
                and 2 * k * self.max_abs() * other.max_abs() < _LIMIT):
            ar, ai = self.fast
            br, bi = other.fast
            re = ar @ br
            im = ar @ bi
            if ai.nnz:
                re = re - ai @ bi
                im = im + ai @ br
            return _Store.from_fast(shape, re, im, den)
        a = self.as_dict()
        b_rows = {}
        for (i, j), v in other.as_dict().items():
            b_rows.setdefault(i, []).append((j, v))
        out = {}
        for (i, m), (ar_, ai_) in a.items():
            for j, (br_, bi_) in b_rows.get(m, ()):
                cr, ci = out.get((i, j), (0, 0))
                out[(i, j)] = (cr + ar_ * br_ - ai_ * bi_, ci + ar_ * bi_ + ai_ * br_)
        return _Store.from_slow(shape, out, den)

    def kron(self, other: "_Store") -> "_Store":
        shape = (self.shape[0] * other.shape[0], self.shape[1] * other.shape[1])
        den = self.den * other.den
        if (self.fast is not None and other.fast is not None
                and 2 * self.max_abs() * other.max_abs() < _LIMIT):
            ar, ai = self.fast
            br, bi = other.fast
            re = sparse.kron(ar, br, format="csr")
            im = sparse.kron(ar, bi, format="csr")
            if ai.nnz:
                re = re - sparse.kron(ai, bi, format="csr")
                im = im + sparse.kron(ai, br, format="csr")
            return _Store.from_fast(shape, re, im, den)
        out = {}
        r1, c1 = other.shape
        b = other.as_dict()
        for (i, j), (ar_, ai_) in self.as_dict().items():
            for (k, l), (br_, bi_) in b.items():
                out[(i * r1 + k, j * c1 + l)] = (ar_ * br_ - ai_ * bi_, ar_ * bi_ + ai_ * br_)
        return _Store.from_slow(shape, out, den)

    def transpose(self, conj: bool = False) -> "_Store":
        shape = (self.shape[1], self.shape[0])
        if self.fast is not None:
            re, im = self.fast
            im_t = im.T
            return _Store.from_fast(shape, re.T, -im_t if conj else im_t, self.den)
        s = -1 if conj else 1
        return _Store.from_slow(shape, {(j, i): (r, s * m) for (i, j), (r, m) in self.slow.items()},
                                self.den)

    def equals(self, other: "_Store") -> bool:
        if self.shape != other.shape or self.den != other.den:
            return False
        if self.fast is not None and other.fast is not None:
            return ((self.fast[0] != other.fast[0]).nnz == 0
                    and (self.fast[1] != other.fast[1]).nnz == 0)
        return self.as_dict() == other.as_dict()

    def is_zero(self) -> bool:
        return self.nnz() == 0

    def entry(self, i: int, j: int) -> Scalar:
        if self.slow is not None:
            r, m = self.slow.get((i, j), (0, 0))
        else:
            r, m = int(self.fast[0][i, j]), int(self.fast[1][i, j])
        return Scalar(Fraction(r, self.den), Fraction(m, self.den))

    def items(self):
        d = self.as_dict()
        for k in sorted(d):
            r, m = d[k]
            yield k, Scalar(Fraction(r, self.den), Fraction(m, self.den))

    def diagonal_constant(self):
        """Return ``c`` if the store equals ``c * identity``, else ``None``."""
        if self.shape[0] != self.shape[1]:
            return None
        d = self.as_dict()
        n = self.shape[0]
        if len(d) != n or any(i != j for i, j in d):
            return None if d else ZERO
        vals = set(d.values())
        if len(vals) != 1:
            return None
        r, m = vals.pop()
        return Scalar(Fraction(r, self.den), Fraction(m, self.den))

    def to_complex(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=complex)
        for (i, j), (r, m) in self.as_dict().items():
            out[i, j] = complex(r / self.den, m / self.den)
        return out


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class _ExactArray:
    """Shared behaviour of :class:`Matrix` and :class:`SparseOp`."""

    __slots__ = ("_store",)

    def __init__(self, store: _Store):
        self._check_shape(store.shape)
        object.__setattr__(self, "_store", store)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def _check_shape(cls, shape):
        pass

    # constructors -----------------------------------------------------------
    @classmethod
    def from_entries(cls, shape, entries):
        """Build from a mapping or iterable of ``((i, j), value)`` pairs.

        Repeated positions are summed.
        """
        if hasattr(entries, "items"):
            entries = entries.items()
        return cls(_Store.from_scalars(tuple(shape), entries))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None):
        cols = rows if cols is None else cols
        return cls(_Store.from_fast((rows, cols), _empty((rows, cols)), _empty((rows, cols)), 1))

    @classmethod
    def identity(cls, n: int):
        eye = sparse.identity(n, dtype=np.int64, format="csr")
        return cls(_Store.from_fast((n, n), eye, _empty((n, n)), 1))

    @classmethod
    def from_int_arrays(cls, re, im=None, den: int = 1):
        """Wrap integer numerator arrays (dense or sparse) with denominator ``den``."""
        re = sparse.csr_array(re, dtype=np.int64)
        im = _empty(re.shape) if im is None else sparse.csr_array(im, dtype=np.int64)
        return cls(_Store.from_fast(re.shape, re, im, den))

    # properties ----------------------------------------------------------
    @property
    def shape(self) -> tuple:
        return self._store.shape

    @property
    def nnz(self) -> int:
        return self._store.nnz()

    @property
    def denominator(self) -> int:
        return self._store.den

    def entry(self, i: int, j: int) -> Scalar:
        return self._store.entry(i, j)

    def __getitem__(self, key):
        i, j = key
        return self._store.entry(i, j)

    def items(self):
        """Iterate over nonzero ``((i, j), Scalar)`` pairs in row-major order."""
        return self._store.items()

    def is_zero(self) -> bool:
        return self._store.is_zero()

    def scalar_multiple_of_identity(self):
        """Return ``c`` when the operator is ``c * 1``, otherwise ``None``."""
        return self._store.diagonal_constant()

    def trace(self) -> Scalar:
        total = ZERO
        for (i, j), v in self.items():
            if i == j:
                total = total + v
        return total

    def transpose(self):
        return type(self)(self._store.transpose())

    def dagger(self):
        """Conjugate transpose."""
        return type(self)(self._store.transpose(conj=True))

    @property
    def T(self):
        return self.transpose()

    def to_complex(self) -> np.ndarray:
        """Floating point copy, for diagnostics only."""
        return self._store.to_complex()

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, _ExactArray):
            if other.shape != self.shape:
                raise DimensionError(
                    f"shape mismatch: {self.shape} and {other.shape}")
            return other._store
        return None

    def __add__(self, other):
        st = self._coerce(other)
        if st is None:
            return NotImplemented
        return type(self)(self._store.add(st))

    def __sub__(self, other):
        st = self._coerce(other)
        if st is None:
            return NotImplemented
        return type(self)(self._store.add(st, sign=-1))

    def __neg__(self):
        return type(self)(self._store.scale(Scalar(-1)))

    def __pos__(self):
        return self

    def __mul__(self, other):
        s = as_scalar(other, strict=False)
        if s is NotImplemented:
            return NotImplemented
        return type(self)(self._store.scale(s))

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = as_scalar(other, strict=False)
        if s is NotImplemented:
            return NotImplemented
        return self * s.inverse()

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, _ExactArray):
            return NotImplemented
        return self._store.equals(other._store)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(shape={self.shape}, nnz={self.nnz})"

    # serialisation -------------------------------------------------------
    def to_json_grid(self) -> list:
        """Dense array-of-arrays of canonical scalar strings."""
        rows, cols = self.shape
        grid = [["0/1"] * cols for _ in range(rows)]
        for (i, j), v in self.items():
            grid[i][j] = str(v)
        return grid

    def dumps(self) -> str:
        return json.dumps(self.to_json_grid(), separators=(",", ":"))

    @classmethod
    def from_json_grid(cls, grid):
        rows = len(grid)
        cols = len(grid[0]) if rows else 0
        if any(len(r) != cols for r in grid):
            raise DimensionError("ragged grid")
        items = [((i, j), Scalar.parse(v)) for i, r in enumerate(grid) for j, v in enumerate(r)]
        return cls.from_entries((rows, cols), items)

    @classmethod
    def loads(cls, text: str):
        return cls.from_json_grid(json.loads(text))


class Matrix(_ExactArray):
    """Exact Gaussian-rational matrix of modest size.

    Dimensions up to ``MAX_DENSE_DIM`` are accepted.  Storage is sparse
    internally; :attr:`entries` gives the dense grid of scalars.

    Examples
    --------
    >>> m = Matrix.from_rows([[1, "1/2 i"], [0, 1]])
    >>> str(m[0, 1])
    '0/1+1/2 i'
    """

    __slots__ = ()

    @classmethod
    def _check_shape(cls, shape):
        if max(shape) > MAX_DENSE_DIM:
            raise DimensionError(
                f"Matrix limited to dimension {MAX_DENSE_DIM}, got {shape}; use SparseOp")

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        items = [((i, j), v) for i, r in enumerate(rows) for j, v in enumerate(r)]
        return cls.from_entries((len(rows), ncols), items)

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def entries(self) -> tuple:
        grid = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.items():
            grid[i][j] = v
        return tuple(tuple(r) for r in grid)

    def to_sparse(self) -> "SparseOp":
        return SparseOp(self._store)


class SparseOp(_ExactArray):
    """Exact square operator of arbitrary dimension, stored sparsely."""

    __slots__ = ()

    @classmethod
    def _check_shape(cls, shape):
        if shape[0] != shape[1]:
            raise DimensionError(f"SparseOp must be square, got {shape}")

    @property
    def dim(self) -> int:
        return self.shape[0]

    @property
    def entries(self) -> dict:
        return dict(self.items())

    def to_matrix(self) -> Matrix:
        return Matrix(self._store)


def _check_kind(a, b, op):
    if not isinstance(a, _ExactArray) or not isinstance(b, _ExactArray):
        raise TypeError(f"{op} needs Matrix or SparseOp operands")


def mat_mul(a, b):
    """Exact product ``a @ b``.

    Raises
    ------
    DimensionError
        If the inner dimensions differ; the message names both shapes.
    """
    _check_kind(a, b, "mat_mul")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    store = a._store.matmul(b._store)
    if isinstance(a, SparseOp) or isinstance(b, SparseOp):
        if store.shape[0] == store.shape[1]:
            return SparseOp(store)
    return Matrix(store)


def kron(a, b):
    """Kronecker product with row-major index ``(i, k) -> i * rows(b) + k``."""
    _check_kind(a, b, "kron")
    store = a._store.kron(b._store)
    if (isinstance(a, SparseOp) or isinstance(b, SparseOp)
            or max(store.shape) > MAX_DENSE_DIM):
        return SparseOp(store)
    return Matrix(store)


def _square_pair(a, b, op):
    _check_kind(a, b, op)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{op} needs equal square shapes, got {a.shape} and {b.shape}")


def commutator(a, b):
    """``[a, b] = ab - ba``."""
    if isinstance(a, Sqrt2Scaled) or isinstance(b, Sqrt2Scaled):
        return Sqrt2Scaled.lift(a).commutator(Sqrt2Scaled.lift(b))
    _square_pair(a, b, "commutator")
    return mat_mul(a, b) - mat_mul(b, a)


def anticommutator(a, b):
    """``{a, b} = ab + ba``."""
    if isinstance(a, Sqrt2Scaled) or isinstance(b, Sqrt2Scaled):
        return Sqrt2Scaled.lift(a).anticommutator(Sqrt2Scaled.lift(b))
    _square_pair(a, b, "anticommutator")
    return mat_mul(a, b) + mat_mul(b, a)


# ---------------------------------------------------------------------------
# sqrt(2) bookkeeping
# ---------------------------------------------------------------------------

class Sqrt2Scaled:
    """Exact value ``op * sqrt(2)**power``.

    Cartan-Weyl combinations carry factors of ``1/sqrt(2)``.  Rather than
    leave Q(i), such values are kept as an exact operator times a power of
    ``sqrt(2)``.  Products add powers; sums need powers of equal parity and
    are brought to the smaller power exactly.
    """

    __slots__ = ("op", "power")

    def __init__(self, op, power: int = 0):
        self.op = op
        self.power = int(power)

    @staticmethod
    def lift(value) -> "Sqrt2Scaled":
        if isinstance(value, Sqrt2Scaled):
            return value
        return Sqrt2Scaled(value, 0)

    def _aligned(self, other):
        other = Sqrt2Scaled.lift(other)
        if (self.power - other.power) % 2:
            raise ValueError(
                "sum of terms with sqrt(2) powers of different parity leaves Q(i)")
        p = min(self.power, other.power)
        a = self.op * Scalar(2 ** ((self.power - p) // 2))
        b = other.op * Scalar(2 ** ((other.power - p) // 2))
        return a, b, p

    def __add__(self, other):
        if other == 0:
            return self
        if isinstance(other, Sqrt2Scaled) and other.op.is_zero():
            return self
        if self.op.is_zero():
            return Sqrt2Scaled.lift(other)
        a, b, p = self._aligned(other)
        return Sqrt2Scaled(a + b, p)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-Sqrt2Scaled.lift(other))

    def __neg__(self):
        return Sqrt2Scaled(-self.op, self.power)

    def __mul__(self, other):
        s = as_scalar(other, strict=False)
        if s is NotImplemented:
            return NotImplemented
        return Sqrt2Scaled(self.op * s, self.power)

    __rmul__ = __mul__

    def __matmul__(self, other):
        other = Sqrt2Scaled.lift(other)
        return Sqrt2Scaled(mat_mul(self.op, other.op), self.power + other.power)

    def commutator(self, other):
        other = Sqrt2Scaled.lift(other)
        return Sqrt2Scaled(commutator(self.op, other.op), self.power + other.power)

    def anticommutator(self, other):
        other = Sqrt2Scaled.lift(other)
        return Sqrt2Scaled(anticommutator(self.op, other.op), self.power + other.power)

    def is_zero(self) -> bool:
        return self.op.is_zero()

    def equals(self, other) -> bool:
        """Exact equality, tolerant of differing representations."""
        other = Sqrt2Scaled.lift(other)
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if (self.power - other.power) % 2:
            return False
        a, b, _ = self._aligned(other)
        return a == b

    def exact(self):
        """Return the plain operator; only valid for even powers."""
        if self.power % 2:
            raise ValueError("odd sqrt(2) power has no exact Q(i) form")
        return self.op * (Scalar(2) ** (self.power // 2))

    def __repr__(self):
        return f"Sqrt2Scaled({self.op!r}, power={self.power})"
