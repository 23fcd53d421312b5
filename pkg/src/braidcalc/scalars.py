"""Exact arithmetic in cyclotomic fields Q(zeta_m).

The whole workbench runs over one cyclotomic field fixed at configuration
time.  A scalar is a vector of rational coefficients in the power basis
1, z, ..., z^(phi(m)-1), reduced modulo the m-th cyclotomic polynomial, so
equality is coefficient-wise and every operation is exact.  No floating
point appears anywhere.

Rationals are gmpy2.mpq when available (much faster elimination kernels)
and fractions.Fraction otherwise; both are arbitrary precision, normalised
with positive denominator.
"""

from __future__ import annotations

from math import gcd

from .errors import BadParams, DivisionByZero, FieldMismatch, RootOrderMismatch

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Q

QZERO = Q(0)
QONE = Q(1)


def euler_phi(m: int) -> int:
    n, result, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


# ---------------------------------------------------------------------------
# dense polynomial helpers over Q, coefficient lists low -> high
# ---------------------------------------------------------------------------

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    out = [QZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod(num, den):
    num = list(num)
    den = _poly_trim(list(den))
    if not den:
        raise DivisionByZero("polynomial division by zero")
    quot = [QZERO] * max(0, len(num) - len(den) + 1)
    inv_lead = QONE / den[-1]
    for k in range(len(num) - len(den), -1, -1):
        coeff = num[k + len(den) - 1] * inv_lead
        if coeff != 0:
            quot[k] = coeff
            for j, b in enumerate(den):
                num[k + j] -= coeff * b
    return _poly_trim(quot), _poly_trim(num)


def cyclotomic_polynomial(m: int) -> list:
    """Phi_m over Q via the defining division (X^m - 1) / prod_{d|m, d<m} Phi_d."""
    num = [-QONE] + [QZERO] * (m - 1) + [QONE]
    den = [QONE]
    for d in range(1, m):
        if m % d == 0:
            den = _poly_mul(den, cyclotomic_polynomial(d))
    quot, rem = _poly_divmod(num, den)
    assert not rem, "X^m - 1 must be divisible by the proper cyclotomic factors"
    return quot


class CycloField:
    """The field Q(zeta_m), presented as Q[X] / (Phi_m)."""

    def __init__(self, m: int):
        if m < 1:
            raise BadParams("field order must be a positive integer")
        self.order = m
        poly = cyclotomic_polynomial(m)
        self.cyclotomic_polynomial = tuple(poly)
        self.degree = len(poly) - 1
        assert self.degree == euler_phi(m)
        # reduction table: X^(degree + j) mod Phi_m for j = 0 .. degree - 2,
        # built by shifting and folding back the overflowing top coefficient
        self._reduction = []
        if self.degree > 1:
            table = [[-c for c in poly[:-1]]]
            for _ in range(self.degree - 2):
                prev = table[-1]
                top = prev[-1]
                row = [QZERO] + prev[:-1]
                if top != 0:
                    for i, c in enumerate(table[0]):
                        row[i] += top * c
                table.append(row)
            self._reduction = [tuple(r) for r in table]
        self.zero = CycloScalar(self, (QZERO,) * self.degree)
        self.one = self.from_rational(QONE)

    # -- constructors -------------------------------------------------------

    def scalar(self, coeffs) -> "CycloScalar":
        coeffs = [Q(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = self._reduce(coeffs)
        coeffs += [QZERO] * (self.degree - len(coeffs))
        return CycloScalar(self, tuple(coeffs))

    def from_rational(self, value) -> "CycloScalar":
        return CycloScalar(self, (Q(value),) + (QZERO,) * (self.degree - 1))

    def from_fraction(self, num, den=1) -> "CycloScalar":
        return self.from_rational(Q(num, den))

    @property
    def gen(self) -> "CycloScalar":
        """zeta_m itself (equal to -1 when m in {1, 2})."""
        if self.degree == 1:
            return self.from_rational(QONE if self.order == 1 else -QONE)
        return CycloScalar(
            self, (QZERO, QONE) + (QZERO,) * (self.degree - 2)
        )

    def root_of_unity(self, n: int, power: int = 1) -> "CycloScalar":
        """A primitive n-th root of unity (zeta_n^power with gcd(power, n) = 1).

        Requires n | m, except n <= 2 where +-1 always exist.
        """
        if n == 1:
            return self.one
        if n == 2:
            return self.from_rational(-QONE)
        if self.order % n:
            raise RootOrderMismatch(
                "no primitive %d-th root of unity in Q(zeta_%d)" % (n, self.order)
            )
        if gcd(power, n) != 1:
            raise BadParams("power %d is not coprime to %d" % (power, n))
        return self.gen ** ((self.order // n) * power)

    def primitive_roots(self, n: int):
        """All primitive n-th roots of unity available in the field."""
        if n == 1:
            return [self.one]
        if n == 2:
            return [self.from_rational(-QONE)]
        return [self.root_of_unity(n, k) for k in range(1, n) if gcd(k, n) == 1]

    # -- internals -----------------------------------------------------------

    def _reduce(self, coeffs):
        """Reduce a coefficient list of length < 2*degree modulo Phi_m."""
        deg = self.degree
        if len(coeffs) <= deg:
            return list(coeffs)
        if deg == 1:
            # X = r with r = +-1, so X^(1+j) = r^(1+j)
            out = [coeffs[0]]
            r = -self.cyclotomic_polynomial[0]
            power = r
            for c in coeffs[1:]:
                out[0] += c * power
                power *= r
            return out
        if len(coeffs) > 2 * deg - 1:
            # longer than any product of reduced scalars: fall back to division
            _, rem = _poly_divmod(list(coeffs), list(self.cyclotomic_polynomial))
            rem += [QZERO] * (deg - len(rem))
            return rem
        out = list(coeffs[:deg])
        for j, c in enumerate(coeffs[deg:]):
            if c == 0:
                continue
            for i, r in enumerate(self._reduction[j]):
                if r != 0:
                    out[i] += c * r
        return out

    def __repr__(self):
        return "CycloField(m=%d, degree=%d)" % (self.order, self.degree)

    def __eq__(self, other):
        return isinstance(other, CycloField) and other.order == self.order

    def __hash__(self):
        return hash(("CycloField", self.order))


_FIELDS: dict[int, CycloField] = {}


def field_make(m: int) -> CycloField:
    """Return Q(zeta_m), cached so identical orders share one instance."""
    fld = _FIELDS.get(m)
    if fld is None:
        fld = _FIELDS[m] = CycloField(m)
    return fld


class CycloScalar:
    """An element of Q(zeta_m) in the power basis; immutable and hashable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_one(self):
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise BadParams("scalar %s is not rational" % (self,))
        return self.coeffs[0]

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            if other.field.order != self.field.order:
                raise FieldMismatch(
                    "operands live in Q(zeta_%d) and Q(zeta_%d)"
                    % (self.field.order, other.field.order)
                )
            return other
        if isinstance(other, int) or type(other) is type(QONE):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloScalar(
            self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloScalar(
            self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return CycloScalar(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        deg = self.field.degree
        if deg == 1:
            return CycloScalar(self.field, (a[0] * b[0],))
        prod = [QZERO] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y != 0:
                    prod[i + j] += x * y
        return CycloScalar(self.field, tuple(self.field._reduce(prod)))

    __rmul__ = __mul__

    def inv(self):
        """Inverse via the extended Euclidean algorithm in Q[X] mod Phi_m."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        deg = self.field.degree
        if deg == 1:
            return CycloScalar(self.field, (QONE / self.coeffs[0],))
        if self.is_rational():
            return self.field.from_rational(QONE / self.coeffs[0])
        # r0 = Phi, r1 = self; track s in r = s * self (mod Phi)
        r0 = list(self.field.cyclotomic_polynomial)
        r1 = _poly_trim(list(self.coeffs))
        s0, s1 = [], [QONE]
        while True:
            quot, rem = _poly_divmod(r0, r1)
            if not rem:
                break
            snew = list(s0)
            prod = _poly_mul(quot, s1)
            snew += [QZERO] * (len(prod) - len(snew))
            for i, c in enumerate(prod):
                snew[i] -= c
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_trim(snew)
        # r1 is the gcd, a nonzero constant since Phi_m is irreducible
        assert len(r1) == 1, "cyclotomic polynomial must be irreducible over Q"
        lead = r1[0]
        inv_coeffs = [c / lead for c in s1]
        return self.field.scalar(inv_coeffs)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero scalar")
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int,)) or type(other) is type(QONE):
            other = self.field.from_rational(other)
        if not isinstance(other, CycloScalar):
            return NotImplemented
        return self.field.order == other.field.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.order, self.coeffs))

    def __repr__(self):
        return "<%s in Q(zeta_%d)>" % (self, self.field.order)

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                z = "z" if k == 1 else "z^%d" % k
                if c == 1:
                    terms.append(z)
                elif c == -1:
                    terms.append("-" + z)
                else:
                    terms.append("%s*%s" % (c, z))
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += ("+" + t) if not t.startswith("-") else t
        return out


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

def q_int(n: int, q: CycloScalar) -> CycloScalar:
    """(n)_q = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise BadParams("q-integer needs n >= 0")
    acc = q.field.zero
    power = q.field.one
    for _ in range(n):
        acc = acc + power
        power = power * q
    return acc


def q_factorial(n: int, q: CycloScalar) -> CycloScalar:
    acc = q.field.one
    for k in range(1, n + 1):
        acc = acc * q_int(k, q)
    return acc


def q_binomial(n: int, i: int, q: CycloScalar) -> CycloScalar:
    """Gaussian binomial via the division-free q-Pascal recurrence.

    binom(n, i)_q = binom(n-1, i-1)_q + q^i binom(n-1, i)_q stays defined at
    roots of unity where the factorial quotient would divide by zero.
    """
    if not (0 <= i <= n):
        raise BadParams("q-binomial needs 0 <= i <= n")
    field = q.field
    row = [field.one]  # row for n = 0
    for _ in range(n):
        new = [field.one]
        for j in range(1, len(row)):
            new.append(row[j - 1] + (q ** j) * row[j])
        new.append(field.one)
        row = new
    return row[i]


def root_order(q: CycloScalar):
    """Least n with q^n = 1, or None.  In Q(zeta_m) torsion has order lcm(2, m)."""
    if q.is_zero():
        raise BadParams("0 is not a root of unity")
    bound = q.field.order if q.field.order % 2 == 0 else 2 * q.field.order
    power = q
    for n in range(1, bound + 1):
        if power.is_one():
            return n
        power = power * q
    return None


def is_regular(q: CycloScalar, upto: int) -> bool:
    """(n)_q != 0 for 2 <= n <= upto."""
    if q.is_zero():
        raise BadParams("regularity is about nonzero scalars")
    acc = q.field.one + q
    power = q
    for _ in range(2, upto + 1):
        if acc.is_zero():
            return False
        power = power * q
        acc = acc + power
    return True


def is_regular_exact(q: CycloScalar) -> bool:
    """Decide regularity globally: (n)_q = 0 for some n >= 2 iff q is a
    primitive root of unity of order >= 2, and all torsion lives in degree
    <= lcm(2, m)."""
    if q.is_zero():
        raise BadParams("regularity is about nonzero scalars")
    order = root_order(q)
    return order is None or order == 1
