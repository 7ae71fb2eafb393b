"""Exact coefficient arithmetic.

Rationals are :class:`fractions.Fraction`.  :class:`MPoly` is a sparse
multivariate polynomial over the rationals in a fixed, named variable set;
:class:`HSeries` is a truncated power series in ``h`` whose coefficients are
``MPoly`` values over one shared variable set.

Every ``HSeries`` carries its truncation order ``trunc``: coefficients of
``h^0 .. h^trunc`` are exact, everything beyond is unknown.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import mpmath

Scalar = Union[int, Fraction]


class RingMismatchError(ValueError):
    """Operands live over different variable sets."""


class PoleError(ArithmeticError):
    """Quotient of two series is not a power series."""


class TruncationError(ValueError):
    pass


class UnassignedVariableError(KeyError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def parse_fraction(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; always returns the reduced fraction."""
    return Fraction(text.strip())


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class MPoly:
    """Sparse polynomial with rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable in ``vars``) to
    nonzero ``Fraction`` coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, Scalar] | None = None):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                c = _frac(c)
                if c:
                    e = tuple(e)
                    if len(e) != n or any(k < 0 for k in e):
                        raise ValueError(f"bad exponent {e} for variables {self.vars}")
                    clean[e] = c
        self.terms = clean

    @classmethod
    def const(cls, vars: Sequence[str], c: Scalar) -> "MPoly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "MPoly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1})

    @classmethod
    def _raw(cls, vars, terms) -> "MPoly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        return p

    # -- ring structure -------------------------------------------------

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise RingMismatchError(f"{self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MPoly._raw(self.vars, {})
            return MPoly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, MPoly) and other.is_constant():
            if other.is_zero():
                raise ZeroDivisionError("division by the zero polynomial")
            return self * (1 / other.constant_term())
        raise TypeError("polynomial division unsupported")

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.vars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def degree(self, name: str | None = None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def coefficient(self, exps: Mapping[str, int]) -> Fraction:
        e = tuple(exps.get(v, 0) for v in self.vars)
        return self.terms.get(e, Fraction(0))

    def univariate_coeffs(self, name: str) -> dict[int, "MPoly"]:
        """Split by powers of one variable."""
        i = self.vars.index(name)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1:]
            out.setdefault(e[i], {})[rest] = c
        return {k: MPoly._raw(self.vars, t) for k, t in out.items()}

    def is_even_in(self, name: str) -> bool:
        i = self.vars.index(name)
        return all(e[i] % 2 == 0 for e in self.terms)

    # -- substitution -----------------------------------------------------

    def scale_var(self, name: str, factor: Scalar) -> "MPoly":
        """Substitute ``name -> factor * name``."""
        i = self.vars.index(name)
        factor = _frac(factor)
        return MPoly(self.vars, {e: c * factor ** e[i] for e, c in self.terms.items()})

    def subs(self, assignment: Mapping[str, Scalar]) -> "MPoly":
        """Substitute rational values for some variables (ring unchanged)."""
        idx = [(self.vars.index(n), _frac(v)) for n, v in assignment.items()]
        out: dict = {}
        for e, c in self.terms.items():
            e = list(e)
            for i, v in idx:
                c *= v ** e[i]
                e[i] = 0
            e = tuple(e)
            out[e] = out.get(e, 0) + c
        return MPoly(self.vars, out)

    def compose_univariate(self, name: str, poly: "MPoly") -> "MPoly":
        """Substitute ``name -> poly`` (poly over the same ring)."""
        i = self.vars.index(name)
        result = MPoly(self.vars)
        for k, part in sorted(self.univariate_coeffs(name).items()):
            result = result + part * poly ** k
        return result

    def rename(self, vars: Sequence[str], mapping: Mapping[str, str]) -> "MPoly":
        """Move into a different ring, sending variable ``a`` to ``mapping[a]``."""
        vars = tuple(vars)
        pos = [vars.index(mapping.get(v, v)) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for j, k in zip(pos, e):
                ne[j] += k
            out[tuple(ne)] = c
        return MPoly(vars, out)

    def evaluate(self, assignment: Mapping[str, object]):
        """Numeric value (mpmath types) at the given point; uses current mp precision."""
        missing = [v for v in self.vars if v not in assignment]
        if missing and any(any(e[self.vars.index(m)] for m in missing) for e in self.terms):
            raise UnassignedVariableError(missing)
        vals = [mpmath.mpmathify(assignment[v]) if v in assignment else 0 for v in self.vars]
        total = mpmath.mpf(0)
        for e, c in self.terms.items():
            t = mpmath.mpf(c.numerator) / c.denominator
            for v, k in zip(vals, e):
                if k:
                    t *= v ** k
            total += t
        return total

    # -- formatting -------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), [-k for k in t[0]]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            a = abs(c)
            if mono:
                coef = "" if a == 1 else fraction_str(a) + "*"
                body = coef + mono
            else:
                body = fraction_str(a)
            parts.append(("-" if c < 0 else "+", body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {b}" for s, b in parts[1:])

    def __repr__(self):
        return f"MPoly({self.vars}, {self})"

    def to_json(self) -> dict:
        return {"monomials": [
            {"exps": {v: k for v, k in zip(self.vars, e) if k},
             "num": str(c.numerator), "den": str(c.denominator)}
            for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, vars: Sequence[str], obj: Mapping) -> "MPoly":
        vars = tuple(vars)
        terms = {}
        for m in obj["monomials"]:
            e = tuple(int(m["exps"].get(v, 0)) for v in vars)
            terms[e] = Fraction(int(m["num"]), int(m["den"]))
        return cls(vars, terms)


class HSeries:
    """Truncated power series ``sum_{n<=trunc} coeffs[n] h^n``."""

    __slots__ = ("vars", "coeffs", "trunc")

    def __init__(self, vars: Sequence[str], coeffs: Iterable, trunc: int):
        if trunc < -1:
            raise TruncationError(f"invalid truncation order {trunc}")
        self.vars = tuple(vars)
        cs = []
        for c in coeffs:
            if isinstance(c, MPoly):
                if c.vars != self.vars:
                    raise RingMismatchError(f"{c.vars} vs {self.vars}")
            else:
                c = MPoly.const(self.vars, c)
            cs.append(c)
        zero = MPoly(self.vars)
        cs = cs[: trunc + 1] + [zero] * (trunc + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.trunc = trunc

    @classmethod
    def constant(cls, vars, c, trunc: int) -> "HSeries":
        return cls(vars, [c], trunc)

    @classmethod
    def monomial(cls, vars, c, power: int, trunc: int) -> "HSeries":
        return cls(vars, [0] * power + [c], trunc)

    @property
    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return self.trunc + 1

    def __getitem__(self, n: int) -> MPoly:
        return self.coeffs[n]

    def __len__(self):
        return self.trunc + 1

    def _check(self, other: "HSeries"):
        if other.vars != self.vars:
            raise RingMismatchError(f"{self.vars} vs {other.vars}")

    def truncate(self, n: int) -> "HSeries":
        return HSeries(self.vars, self.coeffs[: n + 1], min(n, self.trunc))

    def __add__(self, other):
        if isinstance(other, (int, Fraction, MPoly)):
            other = HSeries.constant(self.vars, other, self.trunc)
        if not isinstance(other, HSeries):
            return NotImplemented
        self._check(other)
        n = min(self.trunc, other.trunc)
        return HSeries(self.vars, [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return HSeries(self.vars, [-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, MPoly)):
            return HSeries(self.vars, [c * other for c in self.coeffs], self.trunc)
        if not isinstance(other, HSeries):
            return NotImplemented
        self._check(other)
        n = min(self.trunc, other.trunc)
        a, b = self.coeffs, other.coeffs
        nz_a = [i for i in range(n + 1) if not a[i].is_zero()]
        nz_b = [j for j in range(n + 1) if not b[j].is_zero()]
        out = [MPoly(self.vars)] * (n + 1)
        for i in nz_a:
            for j in nz_b:
                if i + j > n:
                    break
                out[i + j] = out[i + j] + a[i] * b[j]
        return HSeries(self.vars, out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HSeries):
            return series_div(self, other)
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        out = HSeries.constant(self.vars, 1, self.trunc)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, HSeries):
            return NotImplemented
        return self.vars == other.vars and self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.vars, self.trunc, self.coeffs))

    def agrees_with(self, other: "HSeries", order: int | None = None) -> bool:
        """Coefficientwise equality up to ``order`` (default: common truncation)."""
        self._check(other)
        n = min(self.trunc, other.trunc) if order is None else order
        if n > min(self.trunc, other.trunc):
            raise TruncationError(f"cannot compare to order {n}")
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1))

    # -- structural maps -----------------------------------------------------

    def map_coeffs(self, f) -> "HSeries":
        cs = [f(c) for c in self.coeffs]
        vars = cs[0].vars if cs else self.vars
        return HSeries(vars, cs, self.trunc)

    def mirror(self) -> "HSeries":
        """``h -> -h``."""
        return HSeries(self.vars, [c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)],
                       self.trunc)

    def scale_h(self, factor: Scalar) -> "HSeries":
        factor = _frac(factor)
        return HSeries(self.vars, [c * factor ** i for i, c in enumerate(self.coeffs)], self.trunc)

    def shift(self, k: int) -> "HSeries":
        """Multiply by ``h^k`` (k >= 0)."""
        return HSeries(self.vars, [MPoly(self.vars)] * k + list(self.coeffs), self.trunc + k)

    def subs(self, assignment: Mapping[str, Scalar]) -> "HSeries":
        return self.map_coeffs(lambda c: c.subs(assignment))

    def scale_var(self, name: str, factor: Scalar) -> "HSeries":
        return self.map_coeffs(lambda c: c.scale_var(name, factor))

    def rename(self, vars, mapping) -> "HSeries":
        return HSeries(vars, [c.rename(vars, mapping) for c in self.coeffs], self.trunc)

    def scalars(self) -> list[Fraction]:
        """Coefficients as rationals; all coefficients must be constants."""
        out = []
        for c in self.coeffs:
            if not c.is_constant():
                raise ValueError("series has non-constant coefficients")
            out.append(c.constant_term())
        return out

    # -- io -----------------------------------------------------------------

    def to_json(self) -> dict:
        return {"var": "h", "vars": list(self.vars), "trunc": self.trunc,
                "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "HSeries":
        vars = tuple(obj.get("vars", ["s"]))
        return cls(vars, [MPoly.from_json(vars, c) for c in obj["coeffs"]], int(obj["trunc"]))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            h = "" if i == 0 else ("h" if i == 1 else f"h^{i}")
            parts.append(f"({c})" + ("*" + h if h else ""))
        return (" + ".join(parts) or "0") + f" + O(h^{self.trunc + 1})"

    def __repr__(self):
        return f"HSeries({self})"


def poly_series_arith(a: HSeries, b, op: str) -> HSeries:
    """Dispatch helper for ``add`` / ``mul`` / ``scale``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def exp_h(a, N: int, half_shift: int = 0, vars: Sequence[str] | None = None) -> HSeries:
    """``exp(a * h / 2**half_shift)`` to order ``N``.

    ``a`` is an ``MPoly`` or a rational; for a rational, ``vars`` names the ring.
    """
    if N < 0:
        raise TruncationError(f"invalid order {N}")
    if not isinstance(a, MPoly):
        a = MPoly.const(vars if vars is not None else ("s",), a)
    a = a * Fraction(1, 2 ** half_shift)
    coeffs = [MPoly.const(a.vars, 1)]
    for n in range(1, N + 1):
        coeffs.append(coeffs[-1] * a * Fraction(1, n))
    return HSeries(a.vars, coeffs, N)


def two_sinh_h(a, N: int, half_shift: int = 0, vars: Sequence[str] | None = None) -> HSeries:
    """``2*sinh(a*h/2**half_shift)``; with ``half_shift=1`` this is ``q^{a/2} - q^{-a/2}``."""
    e = exp_h(a, N, half_shift, vars)
    return e - e.mirror()


def series_div(num: HSeries, den: HSeries) -> HSeries:
    """Quotient ``num / den`` with valuation bookkeeping.

    The leading coefficient of ``den`` has to be a nonzero rational.
    """
    num._check(den)
    vd = den.valuation
    if vd > den.trunc:
        raise ZeroDivisionError("division by a series that is zero to its truncation order")
    vn = num.valuation
    if vn < vd and vn <= num.trunc:
        raise PoleError(f"valuation {vn} of numerator below valuation {vd} of denominator")
    lead = den.coeffs[vd]
    if not lead.is_constant():
        raise ArithmeticError("leading coefficient of the denominator is not invertible")
    inv = 1 / lead.constant_term()
    n = min(num.trunc, den.trunc) - vd
    a = num.coeffs[vd:]
    d = den.coeffs[vd:]
    d_nz = [j for j in range(1, n + 1) if j < len(d) and not d[j].is_zero()]
    q: list[MPoly] = []
    for k in range(n + 1):
        acc = a[k] if k < len(a) else MPoly(num.vars)
        for j in d_nz:
            if j > k:
                break
            if not q[k - j].is_zero():
                acc = acc - d[j] * q[k - j]
        q.append(acc * inv)
    return HSeries(num.vars, q, n)


def eval_numeric(f: HSeries, assignment: Mapping[str, object], h0, precision: int = 53):
    """Partial sum of ``f`` at ``h = h0``.

    Returns ``(value, note)`` where ``note['last_term']`` is the magnitude of
    the final included term.  Nothing here claims convergence.
    """
    with mpmath.workprec(precision):
        h0 = mpmath.mpmathify(h0)
        total = mpmath.mpf(0)
        term = mpmath.mpf(0)
        hp = mpmath.mpf(1)
        for c in f.coeffs:
            term = c.evaluate(assignment) * hp
            total += term
            hp *= h0
        value = complex(total)
        last = float(abs(term))
    return value, {"last_term": last, "order": f.trunc}


def series_from_rationals(vals: Sequence[Scalar], vars=("s",)) -> HSeries:
    return HSeries(vars, [MPoly.const(vars, v) for v in vals], len(vals) - 1)


def factorial_frac(n: int) -> Fraction:
    return Fraction(math.factorial(n))
