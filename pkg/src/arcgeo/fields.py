"""Exact arithmetic in small finite fields GF(p^h) and linear algebra over them.

Elements are immutable coefficient vectors over GF(p), always reduced against a
fixed monic irreducible modulus, so equality is structural and elements are
hashable.  Everything is exact integer arithmetic; no floats anywhere.
"""

from __future__ import annotations

from functools import lru_cache

MAX_CHARACTERISTIC = 1 << 16
MAX_ORDER = 1 << 20


def is_prime(n):
    """Deterministic trial-division primality check (fine for n <= 2^16)."""
    if n < 2:
        return False
    for f in (2, 3):
        if n % f == 0:
            return n == f
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def prime_factors(n):
    """Sorted distinct prime factors of n >= 1."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _poly_divmod(num, den, p):
    """Quotient and remainder of polynomials over GF(p), coefficients low-first."""
    num = list(num)
    dlen = len(den)
    lead_inv = pow(den[-1], p - 2, p) if den[-1] != 1 else 1
    quot = [0] * max(len(num) - dlen + 1, 0)
    for i in range(len(num) - dlen, -1, -1):
        c = (num[i + dlen - 1] * lead_inv) % p
        if c:
            quot[i] = c
            for j, d in enumerate(den):
                num[i + j] = (num[i + j] - c * d) % p
    while len(num) >= dlen:
        num.pop()
    return quot, num


def _poly_is_irreducible(coeffs, p):
    """Exhaustive root/factor check for a monic polynomial of degree <= 4 over GF(p)."""
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] != 1:
        return False
    # degree 1 is always irreducible
    if deg == 1:
        return True
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    if deg < 4:
        return True
    # degree 4 with no roots can still split into two quadratics
    for b in range(p):
        for c in range(p):
            _, rem = _poly_divmod(coeffs, (c, b, 1), p)
            if not any(rem):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p, h):
    """Smallest monic irreducible modulus for GF(p^h).

    Candidates x^h + a_{h-1}x^{h-1} + ... + a_0 are tried in increasing order
    of the integer a_0 + a_1*p + ... (leading coefficient compared first), so
    the choice is reproducible.  For h == 1 the convention is the polynomial x.
    """
    if h == 1:
        return (0, 1)
    for n in range(p ** h):
        lower, m = [], n
        for _ in range(h):
            m, r = divmod(m, p)
            lower.append(r)
        cand = tuple(lower) + (1,)
        if _poly_is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {h} over GF({p})")


class FieldSpec:
    """Arithmetic context for GF(p^h) with a fixed monic irreducible modulus."""

    __slots__ = ("p", "h", "order", "modulus", "_red_rows", "_generator")

    def __init__(self, p, h=1, modulus=None):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"characteristic {p!r} is not prime")
        if p > MAX_CHARACTERISTIC:
            raise ValueError(f"characteristic {p} exceeds cap {MAX_CHARACTERISTIC}")
        if not isinstance(h, int) or not 1 <= h <= 4:
            raise ValueError(f"extension degree must be in 1..4, got {h!r}")
        order = p ** h
        if order > MAX_ORDER:
            raise ValueError(f"field order {order} exceeds cap {MAX_ORDER}")
        if modulus is None:
            modulus = default_modulus(p, h)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != h + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree h")
            if h == 1:
                if modulus != (0, 1):
                    raise ValueError("degree-1 modulus must be the polynomial x")
            elif not _poly_is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "modulus", modulus)
        # reduction rows: coefficients of t^(h+j) mod modulus, j = 0..h-2
        rows = []
        if h > 1:
            cur = [(-c) % p for c in modulus[:-1]]
            rows.append(tuple(cur))
            for _ in range(h - 2):
                shifted = [0] + cur[:-1]
                top = cur[-1]
                cur = [(shifted[i] + top * rows[0][i]) % p for i in range(h)]
                rows.append(tuple(cur))
        object.__setattr__(self, "_red_rows", tuple(rows))
        object.__setattr__(self, "_generator", None)

    def __setattr__(self, name, value):
        raise AttributeError("FieldSpec is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.h == other.h
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.h, self.modulus))

    def __repr__(self):
        if self.h == 1:
            return f"GF({self.p})"
        return f"GF({self.order})"

    def element(self, value):
        """Element from an int (constant embedding mod p) or a coefficient list."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.h - 1)
            return FieldElement(self, coeffs)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.h:
            raise ValueError(f"coefficient vector longer than degree {self.h}")
        coeffs += (0,) * (self.h - len(coeffs))
        return FieldElement(self, coeffs)

    def from_index(self, i):
        """Element whose base-p digit expansion (low digit first) is i."""
        if not 0 <= i < self.order:
            raise ValueError(f"index {i} out of range for order {self.order}")
        coeffs = []
        for _ in range(self.h):
            i, r = divmod(i, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))

    def zero(self):
        return FieldElement(self, (0,) * self.h)

    def one(self):
        return FieldElement(self, (1,) + (0,) * (self.h - 1))

    def elements(self):
        """All field elements in index order."""
        for i in range(self.order):
            yield self.from_index(i)

    def multiplicative_generator(self):
        """Smallest-index generator of the cyclic group of nonzero elements."""
        if self._generator is not None:
            return self._generator
        n = self.order - 1
        factors = prime_factors(n) if n > 1 else []
        for i in range(1, self.order):
            g = self.from_index(i)
            if all((g ** (n // r)) != self.one() for r in factors):
                object.__setattr__(self, "_generator", g)
                return g
        raise AssertionError("multiplicative group has no generator")


class FieldElement:
    """Immutable element of a FieldSpec, stored as a reduced coefficient tuple."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec, coeffs):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def index(self):
        """Base-p digit encoding, low coefficient least significant."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * self.spec.p + c
        return acc

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("mixed field specs in arithmetic")
            return other
        if isinstance(other, int):
            return self.spec.element(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        return FieldElement(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        return FieldElement(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        spec = self.spec
        p, h = spec.p, spec.h
        if h == 1:
            return FieldElement(spec, ((self.coeffs[0] * o.coeffs[0]) % p,))
        a, b = self.coeffs, o.coeffs
        conv = [0] * (2 * h - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = [c % p for c in conv[:h]]
        for j in range(h - 1):
            top = conv[h + j] % p
            if top:
                row = spec._red_rows[j]
                for i in range(h):
                    out[i] = (out[i] + top * row[i]) % p
        return FieldElement(spec, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        return self ** (self.spec.order - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if self.is_zero():
            if e < 0:
                raise ZeroDivisionError("zero raised to a negative power")
            return self.spec.one() if e == 0 else self
        e %= self.spec.order - 1
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == self.spec.element(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.p, self.spec.h, self.coeffs))

    def __repr__(self):
        if self.spec.h == 1:
            return f"{self.spec!r}:{self.coeffs[0]}"
        return f"{self.spec!r}:{list(self.coeffs)}"


def field_from_order(q):
    """FieldSpec for the prime power q, with the default modulus."""
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"field order must be an integer >= 2, got {q!r}")
    p = q
    f = 2
    while f * f <= p:
        if p % f == 0:
            p = f
            break
        f += 1
    h = 0
    m = q
    while m % p == 0 and m > 1:
        m //= p
        h += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return FieldSpec(p, h)


def element_to_json(a):
    """JSON form: bare int for prime fields, coefficient list (constant first) otherwise."""
    if a.spec.h == 1:
        return a.coeffs[0]
    return list(a.coeffs)


def element_from_json(spec, obj):
    if isinstance(obj, int):
        return spec.element(obj)
    if isinstance(obj, list):
        return spec.element(obj)
    raise ValueError(f"cannot decode field element from {obj!r}")


def operation_tables(spec):
    """Numpy index tables (add, sub, mul, neg, inv) for a small field.

    Element i is spec.from_index(i); inv[0] is 0 and must not be used.
    """
    import numpy as np

    q = spec.order
    if q > 4096:
        raise ValueError("operation tables are meant for small fields only")
    els = list(spec.elements())
    add = np.zeros((q, q), dtype=np.int32)
    sub = np.zeros((q, q), dtype=np.int32)
    mul = np.zeros((q, q), dtype=np.int32)
    neg = np.zeros(q, dtype=np.int32)
    inv = np.zeros(q, dtype=np.int32)
    for i, a in enumerate(els):
        neg[i] = (-a).index
        if i:
            inv[i] = a.inverse().index
        for j, b in enumerate(els):
            add[i, j] = (a + b).index
            sub[i, j] = (a - b).index
            mul[i, j] = (a * b).index
    return {"add": add, "sub": sub, "mul": mul, "neg": neg, "inv": inv}


# ---------------------------------------------------------------------------
# linear algebra over a field
# ---------------------------------------------------------------------------


def _matrix_spec(rows):
    if not rows or not rows[0]:
        raise ValueError("matrix must be non-empty")
    width = len(rows[0])
    spec = None
    for row in rows:
        if len(row) != width:
            raise ValueError("ragged matrix rows")
        for entry in row:
            if not isinstance(entry, FieldElement):
                raise ValueError(f"matrix entry {entry!r} is not a field element")
            if spec is None:
                spec = entry.spec
            elif entry.spec != spec:
                raise ValueError("mixed field specs in matrix")
    return spec


def row_reduce(rows):
    """Reduced row echelon form; returns (rref rows, pivot column list)."""
    spec = _matrix_spec(rows)
    mat = [list(row) for row in rows]
    m, n = len(mat), len(mat[0])
    pivots = []
    r = 0
    for col in range(n):
        pivot_row = next((i for i in range(r, m) if not mat[i][col].is_zero()), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [inv * x for x in mat[r]]
        for i in range(m):
            if i != r and not mat[i][col].is_zero():
                c = mat[i][col]
                mat[i] = [x - c * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    _ = spec
    return mat, pivots


def rank(rows):
    return len(row_reduce(rows)[1])


def null_space(rows):
    """Canonical basis of the right null space (one vector per free column)."""
    spec = _matrix_spec(rows)
    rref, pivots = row_reduce(rows)
    n = len(rows[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [spec.zero()] * n
        vec[fc] = spec.one()
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][fc]
        basis.append(vec)
    return basis


def solve(rows, rhs):
    """One solution of A x = b plus a null-space basis, or None if inconsistent."""
    spec = _matrix_spec(rows)
    if len(rhs) != len(rows):
        raise ValueError("right-hand side length mismatch")
    aug = [list(row) + [spec.element(b) if isinstance(b, int) else b] for row, b in zip(rows, rhs)]
    rref, pivots = row_reduce(aug)
    n = len(rows[0])
    if n in pivots:
        return None
    particular = [spec.zero()] * n
    for r, pc in enumerate(pivots):
        particular[pc] = rref[r][n]
    return particular, null_space(rows)
