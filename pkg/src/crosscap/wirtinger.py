"""Exact polynomial calculus in a complex chart variable and its conjugate.

A ``MonomialField`` stores a finite sum

    f(xi) = sum_{m,n} c_mn xi^m xibar^n

as a map ``(m, n) -> c_mn``.  Addition, multiplication, conjugation and the
Wirtinger derivatives d/dxi, d/dxibar act exactly on the exponents; only the
scalar coefficient arithmetic is floating point.  A ``RationalField`` divides
a monomial field by a power of ``(1 + xi*xibar)``, which is the only
denominator the chart geometry ever produces.

The same classes double as generic bivariate polynomials via ``eval_pair``,
where the second variable is evaluated independently instead of at the
conjugate.

Winding numbers of nonvanishing functions around circles are computed by
summing principal-branch argument increments, refining the sampling until
every increment is safely below pi.
"""

import numpy as np

from .errors import ChartDomainError, UnresolvedWinding, VanishingOnLoop

# Single north chart: evaluations this close to the antipode are rejected
# rather than re-charted.
CHART_BOUND = 1e3

DEFAULT_MIN_MAG = 1e-9
DEFAULT_SAMPLE_COUNT = 256
MAX_SAMPLE_COUNT = 2 ** 16


class MonomialField:
    """Finite sum of monomials ``c_mn xi^m xibar^n`` in canonical form.

    Canonical form means no stored zero coefficients.  Instances are
    immutable: every operation returns a new field, so values are safe to
    share between threads and across parallel grid sweeps.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for (m, n), c in (terms or {}).items():
            m = int(m)
            n = int(n)
            if m < 0 or n < 0:
                raise ValueError(f"negative exponent in term ({m}, {n})")
            c = complex(c)
            if c != 0:
                clean[(m, n)] = clean.get((m, n), 0j) + c
        self._terms = {k: v for k, v in clean.items() if v != 0}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, m, n, c=1.0):
        return cls({(m, n): c})

    @classmethod
    def xi(cls):
        return cls({(1, 0): 1.0})

    @classmethod
    def xibar(cls):
        return cls({(0, 1): 1.0})

    # -- views ---------------------------------------------------------

    def terms(self):
        """Return a copy of the coefficient map ``(m, n) -> c_mn``."""
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, MonomialField):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def degree(self):
        """Total degree, or -1 for the zero field."""
        if not self._terms:
            return -1
        return max(m + n for m, n in self._terms)

    def max_abs_coeff(self):
        if not self._terms:
            return 0.0
        return max(abs(c) for c in self._terms.values())

    def allclose(self, other, tol=1e-12):
        """Coefficient-wise comparison with absolute tolerance ``tol``."""
        keys = set(self._terms) | set(other._terms)
        return all(
            abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) <= tol for k in keys
        )

    def __repr__(self):
        if not self._terms:
            return "MonomialField(0)"
        bits = []
        for (m, n), c in sorted(self._terms.items()):
            bits.append(f"({c:.6g})*xi^{m}*xibar^{n}")
        return "MonomialField(" + " + ".join(bits) + ")"

    # -- algebra --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MonomialField.constant(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0j) + c
        return MonomialField(out)

    __radd__ = __add__

    def __neg__(self):
        return MonomialField({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MonomialField.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return MonomialField({k: c * other for k, c in self._terms.items()})
        out = {}
        for (m1, n1), c1 in self._terms.items():
            for (m2, n2), c2 in other._terms.items():
                k = (m1 + m2, n1 + n2)
                out[k] = out.get(k, 0j) + c1 * c2
        return MonomialField(out)

    __rmul__ = __mul__

    def __pow__(self, p):
        if p != int(p) or p < 0:
            raise ValueError("only nonnegative integer powers")
        out = MonomialField.constant(1.0)
        for _ in range(int(p)):
            out = out * self
        return out

    def conj(self):
        """Complex conjugate field: conj(f)(xi) == conj(f evaluated at xi)."""
        return MonomialField({(n, m): c.conjugate() for (m, n), c in self._terms.items()})

    def is_real_symmetric(self, tol=1e-12):
        """True when ``c_nm == conj(c_mn)`` for every term (real-valued field)."""
        scale = self.max_abs_coeff() or 1.0
        for (m, n), c in self._terms.items():
            if abs(self._terms.get((n, m), 0j) - c.conjugate()) > tol * scale:
                return False
        return True

    # -- calculus --------------------------------------------------------

    def d_xi(self):
        """Exact Wirtinger derivative d/dxi: ``xi^m xibar^n -> m xi^(m-1) xibar^n``."""
        return MonomialField(
            {(m - 1, n): m * c for (m, n), c in self._terms.items() if m > 0}
        )

    def d_xibar(self):
        """Exact Wirtinger derivative d/dxibar."""
        return MonomialField(
            {(m, n - 1): n * c for (m, n), c in self._terms.items() if n > 0}
        )

    # -- evaluation --------------------------------------------------------

    def eval(self, xi):
        """Evaluate at ``xi`` (scalar or ndarray), taking xibar = conj(xi).

        Points with ``|xi| > CHART_BOUND`` live too close to the antipode of
        the chart and are rejected with ``ChartDomainError``.
        """
        z = np.asarray(xi, dtype=complex)
        if z.size and np.max(np.abs(z)) > CHART_BOUND:
            raise ChartDomainError(
                f"|xi| exceeds the chart bound {CHART_BOUND:g}; re-charting is unsupported"
            )
        out = self.eval_pair(z, np.conj(z))
        if np.isscalar(xi) or np.asarray(xi).ndim == 0:
            return complex(out)
        return out

    def eval_pair(self, z, w):
        """Evaluate treating the conjugate slot as the independent variable ``w``.

        Horner's scheme is applied in ``w`` inside each group of equal
        xi-power and then in ``z`` across groups.
        """
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        if not self._terms:
            return np.zeros(np.broadcast(z, w).shape, dtype=complex) if z.ndim or w.ndim else 0j
        by_m = {}
        for (m, n), c in self._terms.items():
            by_m.setdefault(m, {})[n] = c
        acc = 0j
        prev_m = None
        for m in sorted(by_m, reverse=True):
            inner = 0j
            ns = by_m[m]
            prev_n = None
            for n in sorted(ns, reverse=True):
                if prev_n is None:
                    inner = ns[n] + 0j
                else:
                    inner = inner * w ** (prev_n - n) + ns[n]
                prev_n = n
            if prev_n:
                inner = inner * w ** prev_n
            if prev_m is None:
                acc = inner
            else:
                acc = acc * z ** (prev_m - m) + inner
            prev_m = m
        if prev_m:
            acc = acc * z ** prev_m
        return acc

    # -- structure helpers -------------------------------------------------

    def shift_down(self, dm, dn):
        """Exact division by ``xi^dm xibar^dn``; raises if any term is too low."""
        out = {}
        for (m, n), c in self._terms.items():
            if m < dm or n < dn:
                raise ValueError(f"term ({m},{n}) not divisible by xi^{dm} xibar^{dn}")
            out[(m - dm, n - dn)] = c
        return MonomialField(out)

    def divide_by_one_plus_s(self, tol=1e-12):
        """Divide exactly by ``1 + xi*xibar``; returns None when not divisible.

        Long division from the lexicographically lowest term; the quotient is
        accepted only when the residual coefficients are below ``tol`` times
        the coefficient scale.
        """
        scale = self.max_abs_coeff() or 1.0
        maxdeg = self.degree()
        rem = dict(self._terms)
        quo = {}
        while rem:
            key = min(rem)
            c = rem.pop(key)
            if abs(c) <= tol * scale:
                continue
            m, n = key
            if m + n > maxdeg:
                return None
            quo[key] = c
            up = (m + 1, n + 1)
            nxt = rem.get(up, 0j) - c
            if nxt == 0:
                rem.pop(up, None)
            else:
                rem[up] = nxt
        return MonomialField(quo)

    # -- wire format ---------------------------------------------------------

    def to_records(self):
        """List of ``{m, n, re, im}`` records; bit-exact round trip via JSON."""
        return [
            {"m": m, "n": n, "re": c.real, "im": c.imag}
            for (m, n), c in sorted(self._terms.items())
        ]

    @classmethod
    def from_records(cls, records):
        return cls(
            {(rec["m"], rec["n"]): complex(rec["re"], rec.get("im", 0.0)) for rec in records}
        )


class RationalField:
    """A quotient ``num / (1 + xi*xibar)**den_power``, defined on the whole chart."""

    __slots__ = ("num", "den_power")

    def __init__(self, num, den_power=0):
        if den_power < 0 or den_power != int(den_power):
            raise ValueError("den_power must be a nonnegative integer")
        self.num = num
        self.den_power = int(den_power)

    def __eq__(self, other):
        if not isinstance(other, RationalField):
            return NotImplemented
        return self.den_power == other.den_power and self.num == other.num

    def __repr__(self):
        return f"RationalField({self.num!r}, den_power={self.den_power})"

    def eval(self, xi):
        z = np.asarray(xi, dtype=complex)
        s = (z * np.conj(z)).real
        out = self.num.eval(xi) / (1.0 + s) ** self.den_power
        if np.isscalar(xi) or np.asarray(xi).ndim == 0:
            return complex(out)
        return out

    def conj(self):
        return RationalField(self.num.conj(), self.den_power)

    def __mul__(self, scalar):
        return RationalField(self.num * scalar, self.den_power)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, RationalField):
            other = RationalField(MonomialField.constant(other), 0)
        one_plus_s = MonomialField({(0, 0): 1.0, (1, 1): 1.0})
        p = max(self.den_power, other.den_power)
        a = self.num * one_plus_s ** (p - self.den_power)
        b = other.num * one_plus_s ** (p - other.den_power)
        return RationalField(a + b, p)

    def __sub__(self, other):
        if not isinstance(other, RationalField):
            other = RationalField(MonomialField.constant(other), 0)
        return self + RationalField(-other.num, other.den_power)

    def d_xi(self):
        # d/dxi [num / (1+s)^p] = [d_xi(num)(1+s) - p xibar num] / (1+s)^(p+1)
        one_plus_s = MonomialField({(0, 0): 1.0, (1, 1): 1.0})
        p = self.den_power
        num = self.num.d_xi() * one_plus_s - p * MonomialField.xibar() * self.num
        return RationalField(num, p + 1)

    def d_xibar(self):
        one_plus_s = MonomialField({(0, 0): 1.0, (1, 1): 1.0})
        p = self.den_power
        num = self.num.d_xibar() * one_plus_s - p * MonomialField.xi() * self.num
        return RationalField(num, p + 1)

    def reduced(self):
        """Cancel factors of ``1 + xi*xibar`` shared by numerator and denominator."""
        num, p = self.num, self.den_power
        while p > 0:
            q = num.divide_by_one_plus_s()
            if q is None:
                break
            num, p = q, p - 1
        return RationalField(num, p)

    def as_polynomial(self):
        """Return the numerator when the reduced denominator is trivial, else None."""
        red = self.reduced()
        return red.num if red.den_power == 0 else None


def d_xi(f):
    """Wirtinger derivative d/dxi of a monomial or rational field."""
    return f.d_xi()


def d_xibar(f):
    """Wirtinger derivative d/dxibar of a monomial or rational field."""
    return f.d_xibar()


class Loop:
    """A sampling circle: center, radius and an even sample count >= 64."""

    __slots__ = ("center", "radius", "sample_count")

    def __init__(self, center, radius, sample_count=DEFAULT_SAMPLE_COUNT):
        if radius <= 0:
            raise ValueError("loop radius must be positive")
        if sample_count < 64 or sample_count % 2:
            raise ValueError("sample_count must be even and at least 64")
        self.center = complex(center)
        self.radius = float(radius)
        self.sample_count = int(sample_count)

    def samples(self, count=None):
        """Uniformly spaced points on the circle, counterclockwise from angle 0."""
        n = count or self.sample_count
        theta = 2.0 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * theta)

    def __repr__(self):
        return f"Loop(center={self.center}, radius={self.radius}, sample_count={self.sample_count})"


def winding_number(values, min_mag=DEFAULT_MIN_MAG):
    """Winding of a closed sample sequence about the origin.

    Sums principal-branch argument increments between consecutive samples
    (wrapping around).  Raises ``VanishingOnLoop`` when any sample is smaller
    than ``min_mag`` and ``UnresolvedWinding`` when an increment reaches pi,
    which makes the branch ambiguous at this sampling density.
    """
    vals = np.asarray(values, dtype=complex)
    if vals.size < 2:
        raise ValueError("need at least two samples")
    if np.min(np.abs(vals)) < min_mag:
        raise VanishingOnLoop(
            f"|value| dropped below min_mag={min_mag:g} on the loop"
        )
    incs = np.angle(np.roll(vals, -1) / vals)
    if np.max(np.abs(incs)) >= np.pi - 1e-12:
        raise UnresolvedWinding("argument increment reached pi; sampling too coarse")
    total = incs.sum() / (2.0 * np.pi)
    w = round(total)
    if abs(total - w) > 1e-6:
        raise UnresolvedWinding(f"argument sum {total!r} is not an integer multiple of 2*pi")
    return int(w)


def winding_of(func, loop, min_mag=DEFAULT_MIN_MAG, max_samples=MAX_SAMPLE_COUNT):
    """Winding number of ``func`` around ``loop``, refining the sampling.

    The sample count doubles (up to ``max_samples``) until every argument
    increment is below pi/2; a vanishing value on the loop is reported
    immediately since refinement cannot repair it.
    """
    n = loop.sample_count
    while True:
        vals = np.asarray(func(loop.samples(n)), dtype=complex)
        if np.min(np.abs(vals)) < min_mag:
            raise VanishingOnLoop(
                f"|value| dropped below min_mag={min_mag:g} on loop of radius {loop.radius:g}"
            )
        incs = np.angle(np.roll(vals, -1) / vals)
        if np.max(np.abs(incs)) < np.pi / 2:
            total = incs.sum() / (2.0 * np.pi)
            w = round(total)
            if abs(total - w) > 1e-6:
                raise UnresolvedWinding(
                    f"argument sum {total!r} is not an integer multiple of 2*pi"
                )
            return int(w)
        if 2 * n > max_samples:
            raise UnresolvedWinding(
                f"increments still reach pi/2 at the sample cap {max_samples}"
            )
        n *= 2
